#pragma once

#include "anscombe/horizon.hpp"
#include "anscombe/priors.hpp"
#include "anscombe/volterra.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace anscombe {

// ---------------------------------------------------------------------------
// Binomial-tree value iteration

/// Reward G(t, y) of a stopping problem.
using Reward = std::function<double(double t, double y)>;

/// f~(r) (|h| + 2q h^+) with h = h_xi. For q = inf the boundary-equivalent
/// f~(r) h^+ is used. A fixed horizon gives f~(r) = (1 - r)^+.
Reward prior_reward(const Prior& prior, double q, const HorizonModel& horizon);

/// (1 + 1/s)(|y| + 2q y^+) in the standardized time s < 0; q = inf gives
/// (1 + 1/s) y^+.
Reward standardized_reward(double q);

struct ValueIterationConfig {
    double t_end = 1.0;       ///< terminal time (V = G there)
    double span = 1.0;        ///< solve on [t_end - span, t_end]
    double dt = 1e-4;
    double y_max = 0.0;       ///< space truncation; <= 0 selects 6 sqrt(span) + boundary_hint
    double boundary_hint = 1.0;
    bool keep_full = false;   ///< retain every time slice
    std::size_t memory_budget = std::size_t{1} << 30;  ///< bytes
};

struct ValueGrid {
    double dt = 0.0;
    double dy = 0.0;          ///< sqrt(dt)
    std::size_t half_width = 0;  ///< space nodes j dy, |j| <= half_width
    std::vector<double> times;   ///< descending from t_end
    std::vector<double> upper;   ///< first stopping node above 0 per slice
    std::vector<double> lower;   ///< first stopping node below 0 per slice
    std::vector<bool> upper_sentinel;  ///< no stopping node below the grid top
    std::vector<bool> lower_sentinel;
    bool near_top = false;       ///< some boundary within 2 cells of the top
    std::vector<double> start_values;  ///< V on the earliest slice
    std::vector<std::vector<double>> full;  ///< all slices when keep_full

    double y(std::ptrdiff_t j) const { return static_cast<double>(j) * dy; }
    double top() const { return static_cast<double>(half_width) * dy; }
};

/// Backward recursion V(t, y) = max(G, (V(t + dt, y + dy) + V(t + dt, y - dy)) / 2)
/// with V = G on the terminal slice and at the space-grid edges.
ValueGrid value_iteration(const Reward& reward, const ValueIterationConfig& cfg);

/// Boundary in the solver's layout (grid = vg.times, Explicit lower curve).
Boundary extract_boundary(const ValueGrid& vg);

// ---------------------------------------------------------------------------
// Monte Carlo policy evaluation

struct PolicyValueEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    double step = 0.0;
};

/// Stop when S_r >= upper(r) or S_r <= lower(r), checked at multiples of the
/// simulation step; the rule always stops at its terminal time.
class StoppingRule {
public:
    /// Boundary in standardized time; the terminal time is boundary.grid[0].
    static StoppingRule from_boundary(Boundary boundary);
    /// Stop when S >= upper or S <= lower (lower may be -inf). No terminal
    /// time of its own; simulations end at the horizon cap.
    static StoppingRule constant(double upper, double lower);
    static StoppingRule immediate();
    static StoppingRule never();

    /// Upper and lower thresholds at time r.
    double upper_at(double r) const;
    double lower_at(double r) const;
    /// Terminal time of the rule (inf if none).
    double terminal() const noexcept { return terminal_; }
    /// Multiplies both thresholds by `factor` (perturbation checks).
    StoppingRule scaled(double factor) const;

private:
    enum class Kind { Curve, Constant, Immediate, Never };
    Kind kind_ = Kind::Never;
    std::optional<Boundary> boundary_;
    double upper_ = 0.0;
    double lower_ = 0.0;
    double terminal_ = 0.0;
};

struct McConfig {
    std::size_t n_paths = 100000;
    double step = 1e-4;
    std::uint64_t seed = 1;
    /// Simulation cap for random horizons: the smallest r with f~(r) <= cap_eps.
    double cap_eps = 1e-10;
    /// 0: ANSCOMBE_THREADS or the hardware concurrency.
    unsigned threads = 0;

    void validate() const;
};

/// Number of worker threads: cfg value, else ANSCOMBE_THREADS, else hardware.
unsigned worker_count(unsigned requested);

/// Simulates delta from the prior, S with drift delta, a horizon draw, and
/// pays delta (N~ - rho)^+ ((1 + q) D + q) with D the optimal decision at
/// the stopping state (q = inf: delta (N~ - rho)^+ 1(D = +1)).
PolicyValueEstimate mc_policy_value(const Prior& prior, const StoppingRule& rule, double q,
                                    const HorizonModel& horizon, const McConfig& cfg);

/// Driftless S; pays f~(rho) (|h| + 2q h^+)(rho, S_rho) with h normalized
/// to the prior's exact mixture (h_scale). q = inf pays f~(rho) h^+.
PolicyValueEstimate mc_transformed_value(const Prior& prior, const StoppingRule& rule, double q,
                                         const HorizonModel& horizon, const McConfig& cfg);

/// E[rho] for a driftless S under `rule`. With `extrapolate` each path also
/// runs on the 4x coarser monitoring grid (same increments) and contributes
/// 2 rho_fine - rho_coarse, cancelling the O(sqrt(step)) monitoring bias.
PolicyValueEstimate mc_mean_stopping_time(const StoppingRule& rule, double cap, const McConfig& cfg,
                                          bool extrapolate);

struct ThresholdComparison {
    PolicyValueEstimate base;
    std::vector<PolicyValueEstimate> others;
    std::vector<double> diff_mean;  ///< base - other, paired per path
    std::vector<double> diff_se;
};

/// Discounted problem sup E[exp(-(2 r0 + 1) t) |W_t|] for dW = W dt + sqrt(2) dB
/// started at w0, under constant thresholds |W| >= a. All thresholds share
/// the same paths (exact Gaussian transitions of size `step`).
ThresholdComparison mc_ou_threshold_values(double r0, double w0, const std::vector<double>& thresholds,
                                           double cap, const McConfig& cfg);

}  // namespace anscombe
