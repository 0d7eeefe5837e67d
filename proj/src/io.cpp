#include "anscombe/io.hpp"

#include "anscombe/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace anscombe::io {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Three-column curve table shared by both boundary schemas.
struct CurveTable {
    std::vector<double> t;
    std::vector<double> upper;
    std::vector<double> lower;
    LowerKind kind = LowerKind::Mirror;
};

std::string curve_to_csv(std::string_view header, const std::vector<double>& t, const std::vector<double>& upper,
                         const std::vector<double>& lower, LowerKind kind) {
    std::string out(header);
    out += '\n';
    // Rows ascend in time; the solver grids descend.
    for (std::size_t i = t.size(); i-- > 0;) {
        out += format_double(t[i]);
        out += ',';
        out += format_double(upper[i]);
        out += ',';
        if (kind == LowerKind::Explicit) out += format_double(lower[i]);
        if (kind == LowerKind::None) out += "-inf";
        out += '\n';
    }
    return out;
}

CurveTable curve_from_csv(std::string_view text, std::string_view header) {
    CurveTable tab;
    std::size_t line_no = 0;
    bool seen_header = false;
    bool any_empty = false;
    bool any_inf = false;
    bool any_value = false;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty()) continue;
        if (!seen_header) {
            if (line != header) {
                throw Error(ErrorKind::Input, "csv: expected header '" + std::string(header) + "'");
            }
            seen_header = true;
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() != 3) {
            throw Error(ErrorKind::Input, "csv: line " + std::to_string(line_no) + " needs 3 columns");
        }
        tab.t.push_back(parse_double(trim(cols[0])));
        tab.upper.push_back(parse_double(trim(cols[1])));
        const auto low = trim(cols[2]);
        if (low.empty()) {
            any_empty = true;
            tab.lower.push_back(0.0);
        } else {
            const double v = parse_double(low);
            if (v == -kInf) {
                any_inf = true;
            } else {
                any_value = true;
            }
            tab.lower.push_back(v);
        }
    }
    if (!seen_header) throw Error(ErrorKind::Input, "csv: empty input");
    if (tab.t.size() < 2) throw Error(ErrorKind::Input, "csv: need at least two rows");
    if (static_cast<int>(any_empty) + static_cast<int>(any_inf) + static_cast<int>(any_value) > 1) {
        throw Error(ErrorKind::Input, "csv: lower column mixes empty, -inf and numeric entries");
    }
    for (std::size_t i = 1; i < tab.t.size(); ++i) {
        if (!(tab.t[i] > tab.t[i - 1])) throw Error(ErrorKind::Input, "csv: time column must increase");
    }
    tab.kind = any_value ? LowerKind::Explicit : any_inf ? LowerKind::None : LowerKind::Mirror;
    if (tab.kind != LowerKind::Explicit) tab.lower.clear();
    std::reverse(tab.t.begin(), tab.t.end());
    std::reverse(tab.upper.begin(), tab.upper.end());
    std::reverse(tab.lower.begin(), tab.lower.end());
    return tab;
}

double number_field(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw Error(ErrorKind::Input, std::string("json: missing numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

std::vector<double> array_field(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw Error(ErrorKind::Input, std::string("json: missing array field '") + key + "'");
    }
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw Error(ErrorKind::Input, std::string("json: non-numeric entry in '") + key + "'");
        out.push_back(v.get<double>());
    }
    return out;
}

std::string string_field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_string()) {
        throw Error(ErrorKind::Input, std::string("json: missing string field '") + key + "'");
    }
    return j.at(key).get<std::string>();
}

}  // namespace

std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size() || std::isnan(v)) {
        throw Error(ErrorKind::Input, "cannot parse number '" + std::string(text) + "'");
    }
    return v;
}

void write_file_atomic(const std::string& path, std::string_view content) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw Error(ErrorKind::Io, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorKind::Io, "cannot rename into '" + path + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string boundary_to_csv(const Boundary& b) {
    return curve_to_csv("r,b_upper,b_lower", b.grid, b.upper, b.lower, b.lower_kind);
}

Boundary boundary_from_csv(std::string_view text) {
    auto tab = curve_from_csv(text, "r,b_upper,b_lower");
    Boundary b;
    b.grid = std::move(tab.t);
    b.upper = std::move(tab.upper);
    b.lower = std::move(tab.lower);
    b.lower_kind = tab.kind;
    b.validate();
    return b;
}

std::string standard_to_csv(const StandardBoundary& c) {
    return curve_to_csv("s,c_upper,c_lower", c.grid, c.upper, c.lower, c.lower_kind);
}

StandardBoundary standard_from_csv(std::string_view text) {
    auto tab = curve_from_csv(text, "s,c_upper,c_lower");
    StandardBoundary c;
    c.grid = std::move(tab.t);
    c.upper = std::move(tab.upper);
    c.lower = std::move(tab.lower);
    c.lower_kind = tab.kind;
    c.q = tab.kind == LowerKind::None ? kInf : 0.0;
    c.validate();
    return c;
}

json prior_to_json(const Prior& p) {
    if (const auto* n = std::get_if<NormalConjugate>(&p.family())) {
        return {{"family", "normal"}, {"m0", n->m0}, {"r0", n->r0}};
    }
    if (const auto* t = std::get_if<SymmetricTwoPoint>(&p.family())) {
        return {{"family", "two_point"}, {"delta0", t->delta0}};
    }
    const auto& m = std::get<DiscreteMixture>(p.family());
    return {{"family", "mixture"}, {"points", m.points}, {"weights", m.weights}};
}

Prior prior_from_json(const json& j) {
    const std::string family = string_field(j, "family");
    if (family == "normal") return Prior::normal(number_field(j, "m0"), number_field(j, "r0"));
    if (family == "two_point") return Prior::two_point(number_field(j, "delta0"));
    if (family == "mixture") return Prior::mixture(array_field(j, "points"), array_field(j, "weights"));
    throw Error(ErrorKind::Input, "prior: unknown family '" + family + "'");
}

json horizon_to_json(const HorizonModel& h) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FixedHorizon>) {
                return {{"horizon", "fixed"}, {"n", v.n}};
            } else if constexpr (std::is_same_v<T, ExponentialHorizon>) {
                return {{"horizon", "exponential"}, {"lambda", v.lambda}};
            } else if constexpr (std::is_same_v<T, LomaxHorizon>) {
                return {{"horizon", "lomax"}, {"lambda", v.lambda}, {"omega", v.omega}};
            } else {
                return {{"horizon", "table"}, {"r", v.r}, {"f", v.f}};
            }
        },
        h.variant());
}

HorizonModel horizon_from_json(const json& j) {
    const std::string kind = string_field(j, "horizon");
    if (kind == "fixed") return HorizonModel::fixed(number_field(j, "n"));
    if (kind == "exponential") return HorizonModel::exponential(number_field(j, "lambda"));
    if (kind == "lomax") return HorizonModel::lomax(number_field(j, "lambda"), number_field(j, "omega"));
    if (kind == "table") return HorizonModel::table(array_field(j, "r"), array_field(j, "f"));
    throw Error(ErrorKind::Input, "horizon: unknown kind '" + kind + "'");
}

json threshold_to_json(const ThresholdResult& t) {
    json j = {{"threshold", t.threshold}, {"residual", t.residual}};
    j["expected_stop_time"] = t.expected_stop_time ? json(*t.expected_stop_time) : json(nullptr);
    return j;
}

json estimate_to_json(const PolicyValueEstimate& e) {
    return {{"mean", e.mean}, {"std_error", e.std_error}, {"n_paths", e.n_paths}, {"seed", e.seed}, {"step", e.step}};
}

double parse_q(std::string_view text) {
    text = trim(text);
    if (text == "inf" || text == "infinity") return kInf;
    const double q = parse_double(text);
    if (!(q >= 0.0)) throw Error(ErrorKind::Input, "q must be nonnegative or 'inf'");
    return q;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace anscombe::io
