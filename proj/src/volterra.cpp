#include "anscombe/volterra.hpp"

#include "anscombe/detail/backward_trapezoid.hpp"
#include "anscombe/detail/interp.hpp"
#include "anscombe/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace anscombe {

namespace {

using numerics::std_normal_cdf;

/// Discrete-prior model: R(r) = 1 - r, m = h.
class MixtureModel {
public:
    explicit MixtureModel(const Prior& prior) {
        if (!prior.is_discrete()) {
            throw Error(ErrorKind::Input,
                        "boundary solver: normal priors go through the standardized c(s) problem");
        }
        for (const auto& a : prior.atoms()) {
            delta_.push_back(a.delta);
            weight_.push_back(a.weight);
        }
    }

    class Anchor {
    public:
        Anchor(const MixtureModel& m, double t, double y) : m_(m), t_(t), y_(y) {
            coef_.reserve(m.delta_.size());
            for (std::size_t a = 0; a < m.delta_.size(); ++a) {
                const double d = m.delta_[a];
                coef_.push_back(m.weight_[a] * d * std::exp(d * y - 0.5 * d * d * t));
            }
        }
        // E_(t,y)[h(u, X_u) 1(X_u >= z)]
        double upper(double u, double z) const {
            const double tau = u - t_;
            const double s = std::sqrt(tau);
            double acc = 0.0;
            for (std::size_t a = 0; a < coef_.size(); ++a) {
                acc += coef_[a] * std_normal_cdf((y_ - z + m_.delta_[a] * tau) / s);
            }
            return acc;
        }
        // E_(t,y)[h(u, X_u) 1(X_u <= z)]
        double lower(double u, double z) const {
            const double tau = u - t_;
            const double s = std::sqrt(tau);
            double acc = 0.0;
            for (std::size_t a = 0; a < coef_.size(); ++a) {
                acc += coef_[a] * std_normal_cdf((z - y_ - m_.delta_[a] * tau) / s);
            }
            return acc;
        }

    private:
        const MixtureModel& m_;
        double t_;
        double y_;
        std::vector<double> coef_;
    };

    double reward_factor(double t) const { return 1.0 - t; }
    double value(double t, double y) const {
        double h = 0.0;
        for (std::size_t a = 0; a < delta_.size(); ++a) {
            const double d = delta_[a];
            h += weight_[a] * d * std::exp(d * y - 0.5 * d * d * t);
        }
        return h;
    }
    // d/dy h(t, y)
    double slope(double t, double y) const {
        double s = 0.0;
        for (std::size_t a = 0; a < delta_.size(); ++a) {
            const double d = delta_[a];
            s += weight_[a] * d * d * std::exp(d * y - 0.5 * d * d * t);
        }
        return s;
    }
    Anchor anchor(double t, double y) const { return Anchor(*this, t, y); }
    double bracket_ceiling(double t, double prev) const { return prev + 5.0 / std::sqrt(t); }

    double diagonal(double t, double b) const { return 0.5 * value(t, b); }

private:
    std::vector<double> delta_;
    std::vector<double> weight_;
};

void require_symmetric(const Prior& prior) {
    if (!prior.is_discrete() || !prior.is_symmetric()) {
        throw Error(ErrorKind::Input,
                    "boundary solver: requires a symmetric two-point or mixture prior");
    }
}

}  // namespace

void SolverConfig::validate() const {
    if (k < 3) throw Error(ErrorKind::Input, "solver: grid size k must be >= 3");
    if (!(r_min > 0.0 && r_min < 1.0)) throw Error(ErrorKind::Input, "solver: r_min must lie in (0, 1)");
    if (!(inner_tol > 0.0) || !(fp_tol > 0.0)) throw Error(ErrorKind::Input, "solver: tolerances must be positive");
    if (fp_max_iter < 1) throw Error(ErrorKind::Input, "solver: fp_max_iter must be >= 1");
    if (!(fp_relaxation > 0.0)) throw Error(ErrorKind::Input, "solver: fp_relaxation must be positive");
}

AsymmetricSpec AsymmetricSpec::finite(double q) {
    if (!(q >= 0.0) || !std::isfinite(q)) {
        throw Error(ErrorKind::Input, "asymmetric problem: q must be finite and nonnegative");
    }
    return {q};
}

double Boundary::upper_at(double r) const { return detail::interp_descending(grid, upper, r); }

double Boundary::lower_at(double r) const {
    switch (lower_kind) {
        case LowerKind::Mirror: return -upper_at(r);
        case LowerKind::Explicit: return detail::interp_descending(grid, lower, r);
        case LowerKind::None: return -std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

double Boundary::lower_value(std::size_t i) const {
    switch (lower_kind) {
        case LowerKind::Mirror: return -upper[i];
        case LowerKind::Explicit: return lower[i];
        case LowerKind::None: return -std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

void Boundary::validate() const {
    if (grid.size() < 2 || upper.size() != grid.size()) {
        throw Error(ErrorKind::Input, "boundary: grid and upper curve must have equal length >= 2");
    }
    if (lower_kind == LowerKind::Explicit && lower.size() != grid.size()) {
        throw Error(ErrorKind::Input, "boundary: lower curve length mismatch");
    }
    if (grid.front() != 1.0) throw Error(ErrorKind::Input, "boundary: grid must start at r = 1");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] < grid[i - 1]) || !(grid[i] > 0.0)) {
            throw Error(ErrorKind::Input, "boundary: grid must be strictly decreasing in (0, 1]");
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(upper[i])) throw Error(ErrorKind::Input, "boundary: non-finite upper value");
        if (lower_kind == LowerKind::Explicit && !std::isfinite(lower[i])) {
            throw Error(ErrorKind::Input, "boundary: non-finite lower value");
        }
        if (lower_kind == LowerKind::Explicit && i > 0 && !(lower[i] < upper[i])) {
            throw Error(ErrorKind::Input, "boundary: lower curve must lie below the upper curve");
        }
    }
}

std::vector<double> make_time_grid(const SolverConfig& cfg) {
    cfg.validate();
    std::vector<double> grid(cfg.k);
    const double span = 1.0 - cfg.r_min;
    for (std::size_t i = 0; i < cfg.k; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(cfg.k - 1);
        grid[i] = cfg.grid_shape == GridShape::Uniform ? 1.0 - x * span : 1.0 - x * x * span;
    }
    grid.back() = cfg.r_min;
    return grid;
}

double kernel_K(const Prior& prior, double u, double r, double z, double y) {
    if (!(u > r)) throw Error(ErrorKind::Domain, "kernel_K: require u > r");
    const MixtureModel model(prior);
    const auto anchor = model.anchor(r, y);
    return anchor.upper(u, z) - anchor.lower(u, -z);
}

double kernel_diagonal(const Prior& prior, double r, double b) {
    return MixtureModel(prior).diagonal(r, b);
}

Boundary solve_symmetric(const Prior& prior, const SolverConfig& cfg) {
    require_symmetric(prior);
    const MixtureModel model(prior);
    Boundary out;
    out.grid = make_time_grid(cfg);
    auto sol = detail::solve_backward(model, out.grid, detail::Coupling::Symmetric, 1.0, cfg.inner_tol);
    out.upper = std::move(sol.upper);
    out.lower_kind = LowerKind::Mirror;
    return out;
}

Boundary apply_q_operator(const Prior& prior, const Boundary& boundary, double relaxation) {
    require_symmetric(prior);
    if (boundary.lower_kind != LowerKind::Mirror) {
        throw Error(ErrorKind::Input, "fixed-point operator: symmetric boundary required");
    }
    const MixtureModel model(prior);
    Boundary out = boundary;
    out.upper = detail::fixed_point_sweep(model, boundary.grid, boundary.upper, relaxation, false);
    return out;
}

FixedPointResult solve_fixed_point(const Prior& prior, const SolverConfig& cfg) {
    require_symmetric(prior);
    const MixtureModel model(prior);
    FixedPointResult res;
    res.boundary.grid = make_time_grid(cfg);
    res.boundary.upper.assign(cfg.k, 0.0);
    res.boundary.lower_kind = LowerKind::Mirror;

    for (int it = 1; it <= cfg.fp_max_iter; ++it) {
        auto next = detail::fixed_point_sweep(model, res.boundary.grid, res.boundary.upper,
                                              cfg.fp_relaxation, cfg.fp_precondition);
        double change = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            change = std::max(change, std::fabs(next[i] - res.boundary.upper[i]));
        }
        res.boundary.upper = std::move(next);
        res.iterations = it;
        res.last_change = change;
        if (!std::isfinite(change)) break;
        if (change <= cfg.fp_tol) return res;
    }
    std::ostringstream os;
    os << "fixed-point iteration did not converge after " << res.iterations
       << " iterations (last change " << res.last_change << ")";
    throw FixedPointError(os.str(), std::move(res));
}

double residual(const Prior& prior, const Boundary& boundary) {
    require_symmetric(prior);
    if (boundary.lower_kind != LowerKind::Mirror) {
        throw Error(ErrorKind::Input, "residual: symmetric boundary required");
    }
    const MixtureModel model(prior);
    return detail::symmetric_residual(model, boundary.grid, boundary.upper);
}

Boundary solve_asymmetric(const Prior& prior, const AsymmetricSpec& spec, const SolverConfig& cfg) {
    require_symmetric(prior);
    if (!(spec.q >= 0.0)) throw Error(ErrorKind::Input, "asymmetric problem: q must be nonnegative");
    const MixtureModel model(prior);
    Boundary out;
    out.grid = make_time_grid(cfg);
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

}  // namespace anscombe
