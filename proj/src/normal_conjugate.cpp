#include "anscombe/normal_conjugate.hpp"

#include "anscombe/detail/backward_trapezoid.hpp"
#include "anscombe/detail/interp.hpp"
#include "anscombe/numerics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace anscombe {

namespace {

using numerics::std_normal_cdf;
using numerics::std_normal_pdf;

// R(s) = 1 + 1/s, m = y.
class StandardModel {
public:
    class Anchor {
    public:
        Anchor(double s, double y) : s_(s), y_(y) {}
        double upper(double u, double z) const { return standard_upper_tail(s_, y_, u, z); }
        double lower(double u, double z) const { return standard_lower_tail(s_, y_, u, z); }

    private:
        double s_;
        double y_;
    };

    double reward_factor(double s) const { return 1.0 + 1.0 / s; }
    double value(double, double y) const { return y; }
    double slope(double, double) const { return 1.0; }
    Anchor anchor(double s, double y) const { return Anchor(s, y); }
    double bracket_ceiling(double s, double prev) const { return prev + 5.0 * std::sqrt(-s); }
};

double q_factor(double q) {
    if (!(q >= 0.0)) throw Error(ErrorKind::Input, "q must be nonnegative");
    if (std::isinf(q)) return 2.0;
    return (1.0 + 2.0 * q) / (1.0 + q);
}

void check_s_min(double s_min) {
    if (!(s_min < -1.0) || !std::isfinite(s_min)) {
        throw Error(ErrorKind::Input, "standardized problem: s_min must be finite and < -1");
    }
}

double interp_checked(const StandardBoundary& c, const std::vector<double>& values, double s) {
    if (!(s <= -1.0)) throw Error(ErrorKind::Domain, "standardized boundary: s must be <= -1");
    if (s < c.s_min()) {
        std::ostringstream os;
        os << "standardized boundary: s = " << s << " lies below s_min = " << c.s_min()
           << "; solve with a smaller --smin";
        throw Error(ErrorKind::Range, os.str());
    }
    return detail::interp_descending(c.grid, values, s);
}

}  // namespace

double standard_upper_tail(double s, double y, double u, double z) {
    const double sd = std::sqrt(u - s);
    const double d = (y - z) / sd;
    return y * std_normal_cdf(d) + sd * std_normal_pdf(d);
}

double standard_lower_tail(double s, double y, double u, double z) {
    const double sd = std::sqrt(u - s);
    const double d = (z - y) / sd;
    return y * std_normal_cdf(d) - sd * std_normal_pdf(d);
}

double StandardBoundary::upper_at(double s) const { return interp_checked(*this, upper, s); }

double StandardBoundary::lower_at(double s) const {
    switch (lower_kind) {
        case LowerKind::Mirror: return -upper_at(s);
        case LowerKind::Explicit: return interp_checked(*this, lower, s);
        case LowerKind::None: return -std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

void StandardBoundary::validate() const {
    if (grid.size() < 2 || upper.size() != grid.size()) {
        throw Error(ErrorKind::Input, "standardized boundary: grid and upper curve must have equal length >= 2");
    }
    if (grid.front() != -1.0) throw Error(ErrorKind::Input, "standardized boundary: grid must start at s = -1");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] < grid[i - 1])) {
            throw Error(ErrorKind::Input, "standardized boundary: grid must be strictly decreasing");
        }
    }
    if (lower_kind == LowerKind::Explicit && lower.size() != grid.size()) {
        throw Error(ErrorKind::Input, "standardized boundary: lower curve length mismatch");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(upper[i])) throw Error(ErrorKind::Input, "standardized boundary: non-finite value");
        if (lower_kind == LowerKind::Explicit && !std::isfinite(lower[i])) {
            throw Error(ErrorKind::Input, "standardized boundary: non-finite value");
        }
    }
}

std::vector<double> make_s_grid(const SolverConfig& cfg, double s_min) {
    cfg.validate();
    check_s_min(s_min);
    const double span = std::log(-s_min);
    std::vector<double> grid(cfg.k);
    for (std::size_t i = 0; i < cfg.k; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(cfg.k - 1);
        grid[i] = -std::exp(span * (cfg.grid_shape == GridShape::Uniform ? x : x * x));
    }
    grid.front() = -1.0;
    grid.back() = s_min;
    return grid;
}

StandardBoundary solve_c(const SolverConfig& cfg, double s_min) {
    StandardBoundary out;
    out.grid = make_s_grid(cfg, s_min);
    auto sol = detail::solve_backward(StandardModel{}, out.grid, detail::Coupling::Symmetric, 1.0,
                                      cfg.inner_tol);
    out.upper = std::move(sol.upper);
    out.lower_kind = LowerKind::Mirror;
    return out;
}

StandardBoundary solve_cq(const AsymmetricSpec& spec, const SolverConfig& cfg, double s_min) {
    if (!(spec.q >= 0.0)) throw Error(ErrorKind::Input, "asymmetric problem: q must be nonnegative");
    StandardBoundary out;
    out.grid = make_s_grid(cfg, s_min);
    out.q = spec.q;
    const StandardModel model;
    if (spec.is_infinite()) {
        auto sol = detail::solve_backward(model, out.grid, detail::Coupling::UpperOnly, 1.0, cfg.inner_tol);
        out.upper = std::move(sol.upper);
        out.lower_kind = LowerKind::None;
        return out;
    }
    auto sol = detail::solve_backward(model, out.grid, detail::Coupling::Coupled, 1.0 + 2.0 * spec.q,
                                      cfg.inner_tol);
    out.upper = std::move(sol.upper);
    out.lower.resize(sol.lower_mirror.size());
    for (std::size_t i = 0; i < out.lower.size(); ++i) out.lower[i] = -sol.lower_mirror[i];
    out.lower_kind = LowerKind::Explicit;
    return out;
}

double c_residual(const StandardBoundary& c) {
    c.validate();
    const StandardModel model;
    const std::size_t k = c.grid.size();
    std::vector<double> up_m(k);
    std::vector<double> lo_m(k);  // mirrored lower curve, -c-
    for (std::size_t i = 0; i < k; ++i) {
        up_m[i] = -c.upper[i];
        lo_m[i] = c.lower_kind == LowerKind::Explicit ? -c.lower[i] : c.upper[i];
    }
    std::vector<double> neg_lo(k);
    for (std::size_t i = 0; i < k; ++i) neg_lo[i] = -lo_m[i];

    double worst = 0.0;
    for (std::size_t i = 1; i < k; ++i) {
        switch (c.lower_kind) {
            case LowerKind::Mirror:
                worst = std::max(worst, std::fabs(detail::side_equation(model, c.grid, i, c.upper[i],
                                                                        c.upper, up_m, 1.0)));
                break;
            case LowerKind::None:
                worst = std::max(worst, std::fabs(detail::side_equation(model, c.grid, i, c.upper[i],
                                                                        c.upper, up_m, 0.0)));
                break;
            case LowerKind::Explicit: {
                const double w = 1.0 + 2.0 * c.q;
                worst = std::max(worst, std::fabs(detail::side_equation(model, c.grid, i, c.upper[i],
                                                                        c.upper, neg_lo, 1.0 / w)));
                worst = std::max(worst, std::fabs(detail::side_equation(model, c.grid, i, lo_m[i],
                                                                        lo_m, up_m, w)));
                break;
            }
        }
    }
    return worst;
}

double s_of_r(double r0, double r) {
    if (!(r0 >= 0.0) || !(r >= 0.0)) throw Error(ErrorKind::Domain, "time map: require r0 >= 0 and r >= 0");
    if (r0 + r == 0.0) return -std::numeric_limits<double>::infinity();
    return -(r0 + 1.0) / (r0 + r);
}

double r_of_s(double r0, double s) {
    if (!(r0 >= 0.0) || !(s < 0.0)) throw Error(ErrorKind::Domain, "time map: require r0 >= 0 and s < 0");
    return -(r0 + 1.0) / s - r0;
}

double c_to_posterior_mean_boundary(const StandardBoundary& c, double r0, double r) {
    if (!(r0 > 0.0)) throw Error(ErrorKind::Domain, "posterior-mean boundary: require r0 > 0");
    if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorKind::Domain, "posterior-mean boundary: r must lie in [0, 1]");
    return c.upper_at(s_of_r(r0, r)) / std::sqrt(r0 + 1.0);
}

SumBoundaryPoint c_to_sum_boundaries(const StandardBoundary& c, double m0, double r0, double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorKind::Domain, "sum boundary: r must lie in [0, 1]");
    const double s = s_of_r(r0, r);
    const double scale = (r0 + r) / std::sqrt(r0 + 1.0);
    const double shift = -m0 * r0;
    SumBoundaryPoint p;
    p.upper = shift + scale * c.upper_at(s);
    p.lower = c.lower_kind == LowerKind::None ? -std::numeric_limits<double>::infinity()
                                              : shift + scale * c.lower_at(s);
    return p;
}

double c_to_pvalue_boundary(const StandardBoundary& c, double m0, double r0, double r) {
    if (!(r > 0.0)) throw Error(ErrorKind::Domain, "p-value boundary: require r > 0");
    return numerics::std_normal_sf(c_to_sum_boundaries(c, m0, r0, r).upper / std::sqrt(r));
}

double asymptotic_cq(double s, double q) {
    const double p = 1.0 + q_factor(q) / s;
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorKind::Domain, "asymptotic boundary: -s must exceed (1 + 2q)/(1 + q)");
    }
    return std::sqrt(-s) * numerics::std_normal_quantile(p);
}

double pvalue_approx(double r, double r0, double m0, double q) {
    if (!(r > 0.0) || !(r0 >= 0.0)) throw Error(ErrorKind::Domain, "p-value approximation: require r > 0, r0 >= 0");
    const double p = 1.0 - q_factor(q) * (r0 + r) / (r0 + 1.0);
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorKind::Domain, "p-value approximation: r and r0 too large for the quantile argument");
    }
    const double z = (-m0 * r0 + std::sqrt(r0 + r) * numerics::std_normal_quantile(p)) / std::sqrt(r);
    return numerics::std_normal_sf(z);
}

std::string_view to_string(ClassicalOrdering o) {
    switch (o) {
        case ClassicalOrdering::OptimalAcceptsMore: return "optimal_accepts_more";
        case ClassicalOrdering::ClassicalAcceptsMore: return "classical_accepts_more";
        case ClassicalOrdering::Equal: return "equal";
    }
    return "unknown";
}

ClassicalComparison classical_rule_compare(double alpha, double r, double q, double r0, double m0,
                                           const StandardBoundary* c) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::Input, "classical rule: alpha must lie in (0, 1)");
    ClassicalComparison out;
    out.classical = alpha * alpha;
    out.optimal = c ? c_to_pvalue_boundary(*c, m0, r0, r) : pvalue_approx(r, r0, m0, q);
    // Rounding in alpha^2 and in the quantile round trip is far below 1e-9.
    const double tol = 1e-9 * std::max(out.classical, out.optimal);
    if (std::fabs(out.classical - out.optimal) <= tol) {
        out.ordering = ClassicalOrdering::Equal;
    } else if (out.classical > out.optimal) {
        out.ordering = ClassicalOrdering::ClassicalAcceptsMore;
    } else {
        out.ordering = ClassicalOrdering::OptimalAcceptsMore;
    }
    return out;
}

NormalPriorBoundary::NormalPriorBoundary(std::shared_ptr<const StandardBoundary> c, double m0, double r0)
    : c_(std::move(c)), m0_(m0), r0_(r0) {
    if (!c_) throw Error(ErrorKind::Input, "normal prior boundary: missing standardized curve");
    if (!std::isfinite(m0) || !(r0 >= 0.0) || !std::isfinite(r0)) {
        throw Error(ErrorKind::Input, "normal prior boundary: require finite m0 and r0 >= 0");
    }
}

Boundary NormalPriorBoundary::to_boundary(const std::vector<double>& r_grid) const {
    Boundary out;
    out.grid = r_grid;
    out.upper.resize(r_grid.size());
    const bool mirror = c_->lower_kind == LowerKind::Mirror && m0_ == 0.0;
    out.lower_kind = mirror ? LowerKind::Mirror : c_->lower_kind == LowerKind::None ? LowerKind::None
                                                                                    : LowerKind::Explicit;
    if (out.lower_kind == LowerKind::Explicit) out.lower.resize(r_grid.size());
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        const auto p = sum(r_grid[i]);
        out.upper[i] = p.upper;
        if (out.lower_kind == LowerKind::Explicit) out.lower[i] = p.lower;
    }
    return out;
}

}  // namespace anscombe
