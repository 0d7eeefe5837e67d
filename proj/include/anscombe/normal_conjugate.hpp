#pragma once

#include "anscombe/volterra.hpp"

#include <memory>
#include <string_view>
#include <utility>
#include <vector>

namespace anscombe {

inline constexpr double kDefaultSMin = -1e4;

/// Boundary of the standardized problem sup E[(1 + 1/s)(|W| + 2q W^+)] in
/// the time s in [s_min, -1], W a standard Brownian motion in s.
/// grid[0] = -1 > grid[1] > ... > grid.back() = s_min.
struct StandardBoundary {
    std::vector<double> grid;
    std::vector<double> upper;
    std::vector<double> lower;  ///< only for LowerKind::Explicit
    LowerKind lower_kind = LowerKind::Mirror;
    double q = 0.0;

    double s_min() const { return grid.back(); }
    /// Linear interpolation in s. Throws a Range error below s_min.
    double upper_at(double s) const;
    double lower_at(double s) const;
    void validate() const;
};

/// Time grid in s: -exp(L x^2) (SqrtClustered) or -exp(L x) (Uniform) with
/// x uniform on [0, 1] and L = log(-s_min).
std::vector<double> make_s_grid(const SolverConfig& cfg, double s_min);

/// Symmetric c(s), shared by every conjugate-normal prior.
StandardBoundary solve_c(const SolverConfig& cfg, double s_min = kDefaultSMin);

/// Upper and lower boundaries of the q-weighted problem. q = inf gives
/// LowerKind::None.
StandardBoundary solve_cq(const AsymmetricSpec& spec, const SolverConfig& cfg,
                          double s_min = kDefaultSMin);

/// Largest absolute discretized-equation residual over interior grid points
/// (both curves when asymmetric).
double c_residual(const StandardBoundary& c);

/// E_(s,y)[W_u 1(W_u >= z)] and E_(s,y)[W_u 1(W_u <= z)] for u > s.
double standard_upper_tail(double s, double y, double u, double z);
double standard_lower_tail(double s, double y, double u, double z);

/// s = -(r0 + 1)/(r0 + r) and its inverse.
double s_of_r(double r0, double r);
double r_of_s(double r0, double s);

/// b_M(r) = c+(s(r)) / sqrt(r0 + 1).
double c_to_posterior_mean_boundary(const StandardBoundary& c, double r0, double r);

struct SumBoundaryPoint {
    double upper;
    double lower;  ///< -inf when the problem never stops from below
};

/// b_S(r) = -m0 r0 + (r0 + r) c(s(r)) / sqrt(r0 + 1), for both curves.
SumBoundaryPoint c_to_sum_boundaries(const StandardBoundary& c, double m0, double r0, double r);

/// b_p(r) = 1 - Phi(b_S+(r) / sqrt(r)).
double c_to_pvalue_boundary(const StandardBoundary& c, double m0, double r0, double r);

/// sqrt(-s) Phi^-1(1 + k_q / s), k_q = (1 + 2q)/(1 + q) (2 for q = inf).
double asymptotic_cq(double s, double q);

/// Small-(r, r0) approximation of b_p built on asymptotic_cq.
double pvalue_approx(double r, double r0, double m0, double q);

enum class ClassicalOrdering {
    OptimalAcceptsMore,
    ClassicalAcceptsMore,
    Equal,
};

struct ClassicalComparison {
    ClassicalOrdering ordering;
    double classical;  ///< alpha^2
    double optimal;
};

std::string_view to_string(ClassicalOrdering o);

/// Compares the two-trial rule alpha^2 with pvalue_approx, or with the solved
/// b_p when `c` is given.
ClassicalComparison classical_rule_compare(double alpha, double r, double q, double r0, double m0,
                                           const StandardBoundary* c = nullptr);

/// One solved c(s) viewed through a particular (m0, r0). Views share the
/// underlying curve.
class NormalPriorBoundary {
public:
    NormalPriorBoundary(std::shared_ptr<const StandardBoundary> c, double m0, double r0);

    const std::shared_ptr<const StandardBoundary>& standard() const noexcept { return c_; }
    double m0() const noexcept { return m0_; }
    double r0() const noexcept { return r0_; }

    double posterior_mean(double r) const { return c_to_posterior_mean_boundary(*c_, r0_, r); }
    SumBoundaryPoint sum(double r) const { return c_to_sum_boundaries(*c_, m0_, r0_, r); }
    double pvalue(double r) const { return c_to_pvalue_boundary(*c_, m0_, r0_, r); }

    /// b_S on a descending r grid as a Boundary (Explicit lower, or None).
    Boundary to_boundary(const std::vector<double>& r_grid) const;

private:
    std::shared_ptr<const StandardBoundary> c_;
    double m0_;
    double r0_;
};

}  // namespace anscombe
