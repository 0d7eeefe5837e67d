#pragma once

#include "anscombe/explicit.hpp"
#include "anscombe/horizon.hpp"
#include "anscombe/normal_conjugate.hpp"
#include "anscombe/oracle.hpp"
#include "anscombe/priors.hpp"
#include "anscombe/volterra.hpp"

#include "json.hpp"

#include <string>
#include <string_view>

namespace anscombe::io {

/// 17 significant digits; infinities as "inf" / "-inf".
std::string format_double(double x);

/// Parses a number as written by format_double. Throws Input on garbage.
double parse_double(std::string_view text);

/// Writes to a temporary file in the target directory, then renames it.
void write_file_atomic(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

/// `r,b_upper,b_lower` with rows in increasing r; b_lower empty for a
/// mirrored curve and "-inf" when the rule never stops below.
std::string boundary_to_csv(const Boundary& b);
Boundary boundary_from_csv(std::string_view text);

/// `s,c_upper,c_lower` with the same conventions.
std::string standard_to_csv(const StandardBoundary& c);
StandardBoundary standard_from_csv(std::string_view text);

nlohmann::json prior_to_json(const Prior& p);
Prior prior_from_json(const nlohmann::json& j);

nlohmann::json horizon_to_json(const HorizonModel& h);
HorizonModel horizon_from_json(const nlohmann::json& j);

nlohmann::json threshold_to_json(const ThresholdResult& t);
nlohmann::json estimate_to_json(const PolicyValueEstimate& e);

/// Parses "inf" or a nonnegative number.
double parse_q(std::string_view text);

/// Two-space indented JSON with a trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace anscombe::io
