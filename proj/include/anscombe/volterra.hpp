#pragma once

#include "anscombe/error.hpp"
#include "anscombe/priors.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace anscombe {

enum class GridShape {
    Uniform,
    SqrtClustered,  ///< r_i = 1 - ((i-1)/(k-1))^2 (1 - r_min): dense near r = 1
};

struct SolverConfig {
    std::size_t k = 2000;
    GridShape grid_shape = GridShape::SqrtClustered;
    double r_min = 1e-4;
    double inner_tol = 1e-12;
    int fp_max_iter = 500;
    double fp_tol = 1e-8;
    double fp_relaxation = 1.0;
    /// Scale each fixed-point step by the local reward slope. The plain
    /// operator contracts like 1 - O(1 - r) next to r = 1 and stalls there.
    bool fp_precondition = true;

    void validate() const;
};

/// Weight q of patients outside the trial per trial patient; q may be +inf.
struct AsymmetricSpec {
    double q = 0.0;

    static AsymmetricSpec finite(double q);
    static AsymmetricSpec infinite() { return {std::numeric_limits<double>::infinity()}; }

    bool is_infinite() const noexcept { return q == std::numeric_limits<double>::infinity(); }
    bool is_zero() const noexcept { return q == 0.0; }
};

/// How the lower stopping curve relates to the upper one.
enum class LowerKind {
    Mirror,    ///< symmetric: lower = -upper
    Explicit,  ///< separately stored lower curve
    None,      ///< never stop from below
};

/// Stopping boundary in standardized time r on a descending grid
/// grid[0] = 1 > grid[1] > ... > grid.back() = r_min.
struct Boundary {
    std::vector<double> grid;
    std::vector<double> upper;
    std::vector<double> lower;  ///< only for LowerKind::Explicit
    LowerKind lower_kind = LowerKind::Mirror;

    /// Linear interpolation in r; constant continuation outside the grid.
    double upper_at(double r) const;
    /// -upper_at for Mirror, -inf for None.
    double lower_at(double r) const;
    double lower_value(std::size_t i) const;

    /// Checks the structural invariants (ordering, terminal collapse, signs).
    void validate() const;
};

/// Descending time grid for the given configuration (grid[0] == 1).
std::vector<double> make_time_grid(const SolverConfig& cfg);

/// E_(r,y)[ sgn(S_u) h(u, S_u) 1(|S_u| >= z) ] for a two-point or mixture
/// prior; for a symmetric prior this is E[ h(u, |S_u|) 1(|S_u| >= z) ].
double kernel_K(const Prior& prior, double u, double r, double z, double y);

/// Limit of kernel_K as u decreases to r along a differentiable boundary:
/// one half of the sum over atoms of delta exp(delta b - delta^2 r / 2).
double kernel_diagonal(const Prior& prior, double r, double b);

/// Backward trapezoidal solution of the symmetric boundary equation.
Boundary solve_symmetric(const Prior& prior, const SolverConfig& cfg);

struct FixedPointResult {
    Boundary boundary;
    int iterations = 0;
    double last_change = 0.0;
};

/// Thrown when fixed-point iteration hits fp_max_iter; carries the last iterate.
class FixedPointError : public Error {
public:
    FixedPointError(const std::string& message, FixedPointResult last)
        : Error(ErrorKind::Convergence, message), last_(std::move(last)) {}
    const FixedPointResult& last() const noexcept { return last_; }

private:
    FixedPointResult last_;
};

/// Iterates b <- Q b from b = 0 on the solver grid.
FixedPointResult solve_fixed_point(const Prior& prior, const SolverConfig& cfg);

/// One application of the fixed-point operator to a symmetric boundary.
Boundary apply_q_operator(const Prior& prior, const Boundary& boundary, double relaxation = 1.0);

/// Largest absolute discretized-equation residual over the interior grid points.
double residual(const Prior& prior, const Boundary& boundary);

/// Upper and lower boundaries of the q-weighted problem (reward
/// (1-r)(|h| + 2q h^+)). q = 0 reproduces solve_symmetric exactly; q = inf
/// yields LowerKind::None.
Boundary solve_asymmetric(const Prior& prior, const AsymmetricSpec& spec, const SolverConfig& cfg);

}  // namespace anscombe
