#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace anscombe::plot {

struct Curve {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Axes {
    std::string x_label = "r";
    std::string y_label = "boundary";
    bool log_x = false;
    int width = 640;
    int height = 420;
};

/// One curve per value column of a boundary CSV (first column is time).
/// Empty and infinite cells are skipped. Labels are `name` or
/// `name:column` when the file has several non-empty value columns.
std::vector<Curve> curves_from_csv(std::string_view text, const std::string& name);

/// Deterministic SVG: one polyline per curve, clipped to the data bounds, and
/// a legend in input order. Throws Input for an empty list or a curve with
/// fewer than two points.
std::string render_svg(const std::vector<Curve>& curves, const Axes& axes);

}  // namespace anscombe::plot
