#include "anscombe/horizon.hpp"

#include "anscombe/error.hpp"

#include <algorithm>
#include <cmath>

namespace anscombe {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_r(double r) {
    if (!(r >= 0.0)) throw Error(ErrorKind::Domain, "horizon: standardized time must be >= 0");
}

// Index of the segment [r[i], r[i+1]) containing x, or size - 1 past the end.
std::size_t table_segment(const TabulatedHorizon& t, double x) {
    const auto it = std::upper_bound(t.r.begin(), t.r.end(), x);
    return static_cast<std::size_t>(it - t.r.begin()) - 1;
}

double table_slope(const TabulatedHorizon& t, std::size_t i) {
    const std::size_t n = t.r.size();
    if (n == 1) return 0.0;
    if (i + 1 >= n) i = n - 2;
    return (t.f[i + 1] - t.f[i]) / (t.r[i + 1] - t.r[i]);
}

// Where the extension past the last node hits zero.
double table_end(const TabulatedHorizon& t) {
    const double last = t.f.back();
    const double slope = table_slope(t, t.r.size() - 1);
    if (last == 0.0) return t.r.back();
    if (slope >= 0.0) return HUGE_VAL;
    return t.r.back() - last / slope;
}

double table_value(const TabulatedHorizon& t, double r) {
    const std::size_t i = table_segment(t, r);
    const double v = t.f[i] + table_slope(t, i) * (r - t.r[i]);
    return std::max(v, 0.0);
}

double table_derivative(const TabulatedHorizon& t, double r) {
    if (r >= table_end(t)) return 0.0;
    return table_slope(t, table_segment(t, r));
}

}  // namespace

HorizonModel HorizonModel::fixed(double n) {
    if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorKind::Input, "fixed horizon: n must be positive");
    return HorizonModel(FixedHorizon{n});
}

HorizonModel HorizonModel::exponential(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorKind::Input, "exponential horizon: lambda must be positive");
    }
    return HorizonModel(ExponentialHorizon{lambda});
}

HorizonModel HorizonModel::lomax(double lambda, double omega) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::Input, "lomax horizon: lambda must be positive");
    if (!(omega > 1.0) || !std::isfinite(omega)) throw Error(ErrorKind::Input, "lomax horizon: omega must exceed 1");
    return HorizonModel(LomaxHorizon{lambda, omega});
}

HorizonModel HorizonModel::table(std::vector<double> r, std::vector<double> f) {
    if (r.empty() || r.size() != f.size()) {
        throw Error(ErrorKind::Input, "horizon table: r and f must be non-empty and equal length");
    }
    if (r.front() != 0.0 || f.front() != 1.0) {
        throw Error(ErrorKind::Input, "horizon table: must start at r = 0 with f = 1");
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!std::isfinite(r[i]) || !std::isfinite(f[i]) || f[i] < 0.0) {
            throw Error(ErrorKind::Input, "horizon table: values must be finite and f >= 0");
        }
        if (i > 0 && !(r[i] > r[i - 1])) throw Error(ErrorKind::Input, "horizon table: r must be strictly increasing");
        if (i > 0 && f[i] > f[i - 1]) throw Error(ErrorKind::Input, "horizon table: f must be nonincreasing");
    }
    if (r.size() > 1 && (f[1] - f[0]) / r[1] < -1.0 - 1e-12) {
        throw Error(ErrorKind::Input, "horizon table: slope at 0 must be >= -1 (it is -P(N > 0))");
    }
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
        const double left = (f[i] - f[i - 1]) / (r[i] - r[i - 1]);
        const double right = (f[i + 1] - f[i]) / (r[i + 1] - r[i]);
        if (right < left - 1e-12 * std::max(1.0, std::fabs(left))) {
            throw Error(ErrorKind::Input, "horizon table: f must be convex");
        }
    }
    return HorizonModel(TabulatedHorizon{std::move(r), std::move(f)});
}

double horizon_mean(const HorizonModel& model) {
    return std::visit(overloaded{
                          [](const FixedHorizon& h) { return h.n; },
                          [](const ExponentialHorizon& h) { return 1.0 / h.lambda; },
                          [](const LomaxHorizon& h) { return h.lambda / (h.omega - 1.0); },
                          [](const TabulatedHorizon&) { return 1.0; },
                      },
                      model.variant());
}

double f_tilde(const HorizonModel& model, double r) {
    require_r(r);
    return std::visit(overloaded{
                          [&](const FixedHorizon&) { return std::max(1.0 - r, 0.0); },
                          [&](const ExponentialHorizon&) { return std::exp(-r); },
                          [&](const LomaxHorizon& h) {
                              return std::pow(1.0 + r / (h.omega - 1.0), 1.0 - h.omega);
                          },
                          [&](const TabulatedHorizon& t) { return table_value(t, r); },
                      },
                      model.variant());
}

double f_tilde_derivative(const HorizonModel& model, double r) {
    require_r(r);
    return std::visit(overloaded{
                          [&](const FixedHorizon&) { return r < 1.0 ? -1.0 : 0.0; },
                          [&](const ExponentialHorizon&) { return -std::exp(-r); },
                          [&](const LomaxHorizon& h) {
                              return -std::pow(1.0 + r / (h.omega - 1.0), -h.omega);
                          },
                          [&](const TabulatedHorizon& t) { return table_derivative(t, r); },
                      },
                      model.variant());
}

double sample_standardized_horizon(const HorizonModel& model, double u) {
    if (!(u >= 0.0 && u < 1.0)) throw Error(ErrorKind::Domain, "horizon sample: u must lie in [0, 1)");
    return std::visit(overloaded{
                          [&](const FixedHorizon&) { return 1.0; },
                          [&](const ExponentialHorizon&) { return -std::log1p(-u); },
                          [&](const LomaxHorizon& h) {
                              return (h.omega - 1.0) * std::expm1(-std::log1p(-u) / h.omega);
                          },
                          [&](const TabulatedHorizon& t) {
                              // P(N~ > x) = -f~'(x) is a nonincreasing step function.
                              const double survive = 1.0 - u;
                              const double end = table_end(t);
                              for (std::size_t i = 0; i < t.r.size(); ++i) {
                                  const double x = t.r[i];
                                  if (x >= end) return end;
                                  if (-table_derivative(t, x) < survive) return x;
                              }
                              return end;
                          },
                      },
                      model.variant());
}

double horizon_time_cap(const HorizonModel& model, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::Input, "horizon cap: eps must lie in (0, 1)");
    return std::visit(overloaded{
                          [&](const FixedHorizon&) { return 1.0; },
                          [&](const ExponentialHorizon&) { return -std::log(eps); },
                          [&](const LomaxHorizon& h) {
                              return (h.omega - 1.0) * (std::pow(eps, 1.0 / (1.0 - h.omega)) - 1.0);
                          },
                          [&](const TabulatedHorizon& t) {
                              const double end = table_end(t);
                              if (std::isfinite(end)) return end;
                              throw Error(ErrorKind::Input, "horizon table: f~ never reaches zero; no time cap");
                          },
                      },
                      model.variant());
}

}  // namespace anscombe
