#pragma once

#include <algorithm>
#include <cstddef>
#include <span>

namespace anscombe::detail {

/// Linear interpolation on a strictly descending abscissa. Outside the grid
/// the nearest end value is returned.
inline double interp_descending(std::span<const double> grid, std::span<const double> values, double t) {
    const std::size_t n = grid.size();
    if (n == 0) return 0.0;
    if (t >= grid.front()) return values.front();
    if (t <= grid.back()) return values.back();
    // first index with grid[idx] <= t
    const auto it = std::lower_bound(grid.begin(), grid.end(), t,
                                     [](double g, double v) { return g > v; });
    const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    const std::size_t lo = hi - 1;
    const double w = (grid[lo] - t) / (grid[lo] - grid[hi]);
    return values[lo] + w * (values[hi] - values[lo]);
}

}  // namespace anscombe::detail
