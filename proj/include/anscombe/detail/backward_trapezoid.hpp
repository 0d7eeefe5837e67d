#pragma once

// Backward trapezoidal solver shared by the prior-based boundary problem and
// the standardized conjugate-normal problem.
//
// Both problems have the form: reward R(t) m(t, y) with R(T) = 0 at the
// terminal time T, m odd in y and space-time harmonic for a standard Brownian
// motion X. On a boundary point y of the upper stopping curve the
// free-boundary representation reads
//
//   R(t) m(t, y) = int_t^T w(u) { E_(t,y)[m(u,X_u) 1(X_u >= same(u))]
//                               - gamma E_(t,y)[m(u,X_u) 1(X_u <= opp(u))] } du
//
// with w = -R'. The integral is discretized by the trapezoidal rule in the
// measure dR(u) = -w(u) du, i.e. with weights R(u_{j+1}) - R(u_j), so that a
// constant integrand is integrated exactly; for R(t) = 1 - t this is the
// ordinary trapezoidal rule in t. The lower curve of an asymmetric problem is handled in
// mirrored coordinates (y -> -y), which turns it into the same equation with
// the roles of the two curves exchanged and gamma replaced by its reciprocal.
//
// A Model supplies:
//   double reward_factor(double t) const;       // R(t)
//   double value(double t, double y) const;     // m(t, y)
//   double slope(double t, double y) const;     // d/dy m(t, y), fixed-point sweeps only
//   Anchor anchor(double t, double y) const;    // Anchor::upper(u, z), Anchor::lower(u, z)
//   double bracket_ceiling(double t, double prev) const;

#include "anscombe/error.hpp"
#include "anscombe/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <vector>

namespace anscombe::detail {

/// Discretized equation residual at grid[i] for candidate boundary value y.
/// `same` and `opp` must be valid on grid[0..i-1]; the diagonal term uses the
/// limit 0.5 * m(t_i, y) for the own-side tail and 0 for the opposite tail.
template <class Model>
double side_equation(const Model& model, std::span<const double> grid, std::size_t i, double y,
                     std::span<const double> same, std::span<const double> opp, double gamma) {
    const double ti = grid[i];
    const auto anchor = model.anchor(ti, y);
    const double mi = model.value(ti, y);
    double f_next = 0.5 * mi;
    double r_next = model.reward_factor(ti);
    double integral = 0.0;
    for (std::size_t j = i; j-- > 0;) {
        double fj = anchor.upper(grid[j], same[j]);
        if (gamma != 0.0) fj -= gamma * anchor.lower(grid[j], opp[j]);
        const double rj = model.reward_factor(grid[j]);
        integral += 0.5 * (r_next - rj) * (fj + f_next);
        f_next = fj;
        r_next = rj;
    }
    return model.reward_factor(ti) * mi - integral;
}

/// Solves one step of the backward recursion for the curve `same`.
template <class Model>
double solve_side_step(const Model& model, std::span<const double> grid, std::size_t i,
                       std::span<const double> same, std::span<const double> opp, double gamma,
                       double tol) {
    auto eq = [&](double y) { return side_equation(model, grid, i, y, same, opp, gamma); };

    const double prev = same[i - 1];
    const double prev2 = i >= 2 ? same[i - 2] : prev;
    const double ceiling = model.bracket_ceiling(grid[i], prev);
    double d = std::max(2.0 * std::fabs(prev - prev2), 1e-6 * (1.0 + std::fabs(prev)));

    auto fail = [&](const char* what) {
        std::ostringstream os;
        os << "backward solver: " << what << " at step " << i << " (t = " << grid[i] << ")";
        return SolverError(ErrorKind::Bracket, i, os.str());
    };

    double lo;
    double hi;
    const double f_prev = eq(prev);
    if (f_prev == 0.0) return prev;
    if (f_prev < 0.0) {
        lo = prev;
        for (;;) {
            hi = std::min(prev + d, ceiling);
            const double fh = eq(hi);
            if (fh >= 0.0) break;
            if (hi >= ceiling) throw fail("no sign change below the bracket ceiling");
            lo = hi;
            d *= 2.0;
        }
    } else {
        hi = prev;
        for (;;) {
            lo = std::max(prev - d, 0.0);
            const double fl = eq(lo);
            if (fl < 0.0) break;
            if (lo <= 0.0) {
                if (fl == 0.0) return 0.0;
                throw fail("equation is nonnegative at zero");
            }
            hi = lo;
            d *= 2.0;
        }
    }
    try {
        return numerics::find_root(eq, {lo, hi, tol, 300});
    } catch (const Error& e) {
        throw SolverError(e.kind(), i, std::string("backward solver step: ") + e.what());
    }
}

/// Result of a backward solve. `lower_mirror` holds -b_lower and is empty when
/// the problem has no lower stopping curve.
struct BackwardSolution {
    std::vector<double> upper;
    std::vector<double> lower_mirror;
};

enum class Coupling {
    Symmetric,   ///< lower = -upper, gamma = 1
    Coupled,     ///< two curves, penalty weight on the upper side
    UpperOnly,   ///< no stopping below (limit of an infinite penalty weight)
};

/// Backward recursion from grid[0] = T (curve value 0) to grid.back().
/// `upper_weight` is the factor 1 + 2q multiplying the upper reward branch.
template <class Model>
BackwardSolution solve_backward(const Model& model, std::span<const double> grid, Coupling coupling,
                                double upper_weight, double tol) {
    const std::size_t k = grid.size();
    BackwardSolution out;
    out.upper.assign(k, 0.0);
    std::vector<double> neg_upper(k, 0.0);
    std::vector<double> neg_lower_m;
    if (coupling == Coupling::Coupled) {
        out.lower_mirror.assign(k, 0.0);
        neg_lower_m.assign(k, 0.0);
    }
    const double inv_weight = 1.0 / upper_weight;

    for (std::size_t i = 1; i < k; ++i) {
        switch (coupling) {
            case Coupling::Symmetric:
                out.upper[i] = solve_side_step(model, grid, i, out.upper, neg_upper, 1.0, tol);
                break;
            case Coupling::UpperOnly:
                out.upper[i] = solve_side_step(model, grid, i, out.upper, neg_upper, 0.0, tol);
                break;
            case Coupling::Coupled: {
                const double up =
                    solve_side_step(model, grid, i, out.upper, neg_lower_m, inv_weight, tol);
                const double lo =
                    solve_side_step(model, grid, i, out.lower_mirror, neg_upper, upper_weight, tol);
                out.upper[i] = up;
                out.lower_mirror[i] = lo;
                neg_lower_m[i] = -lo;
                break;
            }
        }
        neg_upper[i] = -out.upper[i];
    }
    return out;
}

/// One Jacobi sweep of b <- b + lambda_i (integral - reward) for a symmetric
/// curve. With `precondition` the step at grid point i is divided by the
/// reward slope R(t_i) d/dy m(t_i, b_i), which leaves the fixed points
/// unchanged; otherwise lambda_i = relax. Grid point 0 stays at 0.
template <class Model>
std::vector<double> fixed_point_sweep(const Model& model, std::span<const double> grid,
                                      std::span<const double> b, double relax, bool precondition) {
    std::vector<double> neg(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) neg[i] = -b[i];
    std::vector<double> next(b.size(), 0.0);
    for (std::size_t i = 1; i < b.size(); ++i) {
        double lambda = relax;
        if (precondition) lambda /= model.reward_factor(grid[i]) * model.slope(grid[i], b[i]);
        next[i] = b[i] - lambda * side_equation(model, grid, i, b[i], b, neg, 1.0);
    }
    return next;
}

/// max_i |equation residual| over interior grid points of a symmetric curve.
template <class Model>
double symmetric_residual(const Model& model, std::span<const double> grid, std::span<const double> b) {
    std::vector<double> neg(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) neg[i] = -b[i];
    double worst = 0.0;
    for (std::size_t i = 1; i < b.size(); ++i) {
        worst = std::max(worst, std::fabs(side_equation(model, grid, i, b[i], b, neg, 1.0)));
    }
    return worst;
}

}  // namespace anscombe::detail
