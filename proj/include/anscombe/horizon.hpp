#pragma once

#include <utility>
#include <variant>
#include <vector>

namespace anscombe {

struct FixedHorizon {
    double n;
};

struct ExponentialHorizon {
    double lambda;
};

struct LomaxHorizon {
    double lambda;
    double omega;  ///< shape, > 1
};

/// Discount function tabulated in standardized time: r[0] = 0, f[0] = 1,
/// nonincreasing and convex; linear between nodes. Past the last node the
/// last slope continues until the curve reaches 0.
struct TabulatedHorizon {
    std::vector<double> r;
    std::vector<double> f;
};

class HorizonModel {
public:
    using Variant = std::variant<FixedHorizon, ExponentialHorizon, LomaxHorizon, TabulatedHorizon>;

    static HorizonModel fixed(double n);
    static HorizonModel exponential(double lambda);
    static HorizonModel lomax(double lambda, double omega);
    static HorizonModel table(std::vector<double> r, std::vector<double> f);

    const Variant& variant() const noexcept { return v_; }
    bool is_fixed() const noexcept { return std::holds_alternative<FixedHorizon>(v_); }

private:
    explicit HorizonModel(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// E[N] in patients. A table is already standardized, so its mean is 1.
double horizon_mean(const HorizonModel& model);

/// f~(r) = E[(N - r E[N])^+] / E[N].
double f_tilde(const HorizonModel& model, double r);

/// f~'(r) = -P(N > r E[N]) (right derivative at kinks).
double f_tilde_derivative(const HorizonModel& model, double r);

/// Standardized horizon N / E[N] from a uniform u in [0, 1). Fixed gives 1.
double sample_standardized_horizon(const HorizonModel& model, double u);

/// Smallest r with f~(r) <= eps; used to cap simulations.
double horizon_time_cap(const HorizonModel& model, double eps);

}  // namespace anscombe
