#pragma once

#include <optional>

namespace anscombe {

struct ThresholdResult {
    double threshold = 0.0;
    double residual = 0.0;  ///< defining function at the threshold
    std::optional<double> expected_stop_time;
};

/// delta0 - C tanh(delta0 x) tanh(C x), C = sqrt(delta0^2 + 2): the two-sided
/// threshold equation divided by cosh(delta0 x) cosh(C x).
double exp_two_sided_equation(double delta0, double x);

/// delta0 - C tanh(delta0 x): the one-sided equation divided by
/// cosh(delta0 x) exp(C x).
double exp_one_sided_equation(double delta0, double x);

/// x1*: constant |S| threshold for the maximin problem with an exponential
/// horizon. expected_stop_time = x1*^2.
ThresholdResult maximin_exp_two_sided(double delta0);

struct OneSidedClosedForms {
    double log_ratio;  ///< ln((C + d)/(C - d)) / (2 d)
    double log_sum;    ///< ln(sqrt(d^2/2 + 1) + d/sqrt(2)) / d
};

OneSidedClosedForms one_sided_closed_forms(double delta0);

/// x2*: one-sided threshold (q = inf) from the closed form.
ThresholdResult maximin_exp_one_sided(double delta0);

/// x2* by bracketing the defining equation instead of the closed form.
double maximin_exp_one_sided_numeric(double delta0);

/// 2(r0 + 1) M(r0 + 2, 3/2, w^2/2) / M(r0 + 1, 1/2, w^2/2) w^2 - (1 + w^2).
double lomax_equation(double r0, double w);

/// w*(r0) for the Lomax horizon with lambda = n0.
ThresholdResult lomax_threshold(double r0);

/// c(s) = w*(r0) sqrt(-s).
double lomax_boundary(double r0, double s);

}  // namespace anscombe
