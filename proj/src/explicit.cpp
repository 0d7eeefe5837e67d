#include "anscombe/explicit.hpp"

#include "anscombe/error.hpp"
#include "anscombe/numerics.hpp"

#include <cmath>

namespace anscombe {

namespace {

constexpr double kRootTol = 1e-15;

void require_delta0(double delta0) {
    if (!(delta0 > 0.0) || !std::isfinite(delta0)) throw Error(ErrorKind::Input, "delta0 must be positive");
}

double c_of(double delta0) { return std::sqrt(delta0 * delta0 + 2.0); }

// Root of f on (1e-6, X], X = 1/scale doubled until the sign changes.
template <class F>
double bracketed_root(F&& f, double scale) {
    const auto [lo, hi] = numerics::expand_bracket_right(f, 1e-6, 1.0 / scale, 30);
    return numerics::find_root(f, {lo, hi, kRootTol, 300});
}

}  // namespace

double exp_two_sided_equation(double delta0, double x) {
    const double c = c_of(delta0);
    return delta0 - c * std::tanh(delta0 * x) * std::tanh(c * x);
}

double exp_one_sided_equation(double delta0, double x) {
    return delta0 - c_of(delta0) * std::tanh(delta0 * x);
}

ThresholdResult maximin_exp_two_sided(double delta0) {
    require_delta0(delta0);
    ThresholdResult out;
    out.threshold = bracketed_root([&](double x) { return exp_two_sided_equation(delta0, x); }, delta0);
    out.residual = exp_two_sided_equation(delta0, out.threshold);
    out.expected_stop_time = out.threshold * out.threshold;
    return out;
}

OneSidedClosedForms one_sided_closed_forms(double delta0) {
    require_delta0(delta0);
    const double c = c_of(delta0);
    return {std::log((c + delta0) / (c - delta0)) / (2.0 * delta0),
            std::log(std::sqrt(0.5 * delta0 * delta0 + 1.0) + delta0 / std::sqrt(2.0)) / delta0};
}

ThresholdResult maximin_exp_one_sided(double delta0) {
    ThresholdResult out;
    out.threshold = one_sided_closed_forms(delta0).log_sum;
    out.residual = exp_one_sided_equation(delta0, out.threshold);
    return out;
}

double maximin_exp_one_sided_numeric(double delta0) {
    require_delta0(delta0);
    return bracketed_root([&](double x) { return exp_one_sided_equation(delta0, x); }, delta0);
}

double lomax_equation(double r0, double w) {
    const double z = 0.5 * w * w;
    const double ratio = numerics::kummer_m(r0 + 2.0, 1.5, z) / numerics::kummer_m(r0 + 1.0, 0.5, z);
    return 2.0 * (r0 + 1.0) * ratio * w * w - (1.0 + w * w);
}

ThresholdResult lomax_threshold(double r0) {
    if (!(r0 > 0.0) || !std::isfinite(r0)) throw Error(ErrorKind::Input, "lomax threshold: r0 must be positive");
    ThresholdResult out;
    out.threshold = bracketed_root([&](double w) { return lomax_equation(r0, w); }, 1.0);
    out.residual = lomax_equation(r0, out.threshold);
    return out;
}

double lomax_boundary(double r0, double s) {
    if (!(s < 0.0)) throw Error(ErrorKind::Domain, "lomax boundary: s must be negative");
    return lomax_threshold(r0).threshold * std::sqrt(-s);
}

}  // namespace anscombe
