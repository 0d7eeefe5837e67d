#include "anscombe/priors.hpp"

#include "anscombe/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace anscombe {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Prior Prior::normal(double m0, double r0) {
    if (!std::isfinite(m0) || !std::isfinite(r0) || r0 < 0.0) {
        throw Error(ErrorKind::Input, "normal prior: require finite m0 and r0 >= 0");
    }
    return Prior(NormalConjugate{m0, r0});
}

Prior Prior::two_point(double delta0) {
    if (!(delta0 > 0.0) || !std::isfinite(delta0)) {
        throw Error(ErrorKind::Input, "two-point prior: require delta0 > 0");
    }
    return Prior(SymmetricTwoPoint{delta0});
}

Prior Prior::mixture(std::vector<double> points, std::vector<double> weights) {
    if (points.empty() || points.size() != weights.size()) {
        throw Error(ErrorKind::Input, "mixture prior: points and weights must be non-empty and equal length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i]) || !(weights[i] > 0.0)) {
            throw Error(ErrorKind::Input, "mixture prior: points finite, weights positive");
        }
        total += weights[i];
    }
    if (std::fabs(total - 1.0) > 1e-12) {
        throw Error(ErrorKind::Input, "mixture prior: weights must sum to 1");
    }
    return Prior(DiscreteMixture{std::move(points), std::move(weights)});
}

std::vector<Atom> Prior::atoms() const {
    return std::visit(
        overloaded{
            [](const NormalConjugate&) -> std::vector<Atom> {
                throw Error(ErrorKind::Input, "normal prior has no atoms");
            },
            [](const SymmetricTwoPoint& p) {
                return std::vector<Atom>{{p.delta0, 0.5}, {-p.delta0, 0.5}};
            },
            [](const DiscreteMixture& p) {
                std::vector<Atom> out;
                out.reserve(p.points.size());
                for (std::size_t i = 0; i < p.points.size(); ++i) {
                    out.push_back({p.points[i], p.weights[i]});
                }
                return out;
            },
        },
        family_);
}

bool Prior::is_symmetric() const {
    if (const auto* n = std::get_if<NormalConjugate>(&family_)) return n->m0 == 0.0;
    if (std::holds_alternative<SymmetricTwoPoint>(family_)) return true;

    // Mixture: every atom needs a mirror atom of equal weight.
    auto pos = atoms();
    auto neg = pos;
    for (auto& a : neg) a.delta = -a.delta;
    auto by_delta = [](const Atom& l, const Atom& r) { return l.delta < r.delta; };
    std::sort(pos.begin(), pos.end(), by_delta);
    std::sort(neg.begin(), neg.end(), by_delta);
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const double scale = std::max(1.0, std::fabs(pos[i].delta));
        if (std::fabs(pos[i].delta - neg[i].delta) > 1e-12 * scale ||
            std::fabs(pos[i].weight - neg[i].weight) > 1e-12) {
            return false;
        }
    }
    return true;
}

double Prior::mean() const {
    if (const auto* n = std::get_if<NormalConjugate>(&family_)) return n->m0;
    double m = 0.0;
    for (const auto& a : atoms()) m += a.weight * a.delta;
    return m;
}

double h_xi(const Prior& prior, double r, double y) {
    return std::visit(
        overloaded{
            [&](const NormalConjugate& p) {
                const double prec = p.r0 + r;
                if (!(prec > 0.0)) {
                    throw Error(ErrorKind::Singular, "h_xi: improper normal prior at r = 0");
                }
                const double m = (p.m0 * p.r0 + y) / prec;
                return m * std::exp(0.5 * m * m * prec) / std::sqrt(prec);
            },
            [&](const SymmetricTwoPoint& p) {
                const double d = p.delta0;
                return d * std::exp(-0.5 * d * d * r) * std::sinh(d * y);
            },
            [&](const DiscreteMixture& p) {
                double h = 0.0;
                for (std::size_t i = 0; i < p.points.size(); ++i) {
                    const double d = p.points[i];
                    h += p.weights[i] * d * std::exp(d * y - 0.5 * d * d * r);
                }
                return h;
            },
        },
        prior.family());
}

double h_scale(const Prior& prior) {
    if (const auto* n = std::get_if<NormalConjugate>(&prior.family())) {
        if (!(n->r0 > 0.0)) {
            throw Error(ErrorKind::Singular, "h_scale: improper normal prior has no normalization");
        }
        return std::sqrt(n->r0) * std::exp(-0.5 * n->r0 * n->m0 * n->m0);
    }
    return 1.0;
}

int optimal_decision(const Prior& prior, double r, double y) {
    return h_xi(prior, r, y) >= 0.0 ? 1 : -1;
}

StandardizedScaling StandardizedScaling::make(double sigma, double horizon_mean) {
    if (!(sigma > 0.0) || !(horizon_mean > 0.0)) {
        throw Error(ErrorKind::Input, "scaling: sigma and horizon mean must be positive");
    }
    return {sigma, horizon_mean};
}

StandardizedPoint to_standardized(const StandardizedScaling& s, const ClinicalPoint& p) {
    const double root_n = std::sqrt(s.horizon_mean);
    return {p.mu * root_n / s.sigma, p.t / s.horizon_mean, p.x / (root_n * s.sigma)};
}

ClinicalPoint from_standardized(const StandardizedScaling& s, const StandardizedPoint& p) {
    const double root_n = std::sqrt(s.horizon_mean);
    return {p.delta * s.sigma / root_n, p.r * s.horizon_mean, p.y * root_n * s.sigma};
}

}  // namespace anscombe
