#include "anscombe/oracle.hpp"

#include "anscombe/error.hpp"
#include "anscombe/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

namespace anscombe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream tags keep the estimators' random numbers disjoint for a given seed.
constexpr std::uint32_t kTagPolicy = 1;
constexpr std::uint32_t kTagTransformed = 2;
constexpr std::uint32_t kTagStoppingTime = 3;
constexpr std::uint32_t kTagOu = 4;

bool infinite_q(double q) { return std::isinf(q); }

void check_q(double q) {
    if (!(q >= 0.0)) throw Error(ErrorKind::Input, "q must be nonnegative (or inf)");
}

// Runs body(path) for every path, split into contiguous chunks over threads.
template <class Body>
void for_each_path(std::size_t n_paths, unsigned threads, Body&& body) {
    const unsigned n_workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n_paths));
    if (n_workers <= 1) {
        for (std::size_t p = 0; p < n_paths; ++p) body(p);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    const std::size_t chunk = (n_paths + n_workers - 1) / n_workers;
    for (unsigned w = 0; w < n_workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n_paths, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &body] {
            for (std::size_t p = begin; p < end; ++p) body(p);
        });
    }
    for (auto& t : pool) t.join();
}

PolicyValueEstimate summarize(const std::vector<double>& x, const McConfig& cfg) {
    PolicyValueEstimate out;
    out.n_paths = x.size();
    out.seed = cfg.seed;
    out.step = cfg.step;
    double sum = 0.0;
    for (double v : x) sum += v;
    out.mean = sum / static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - out.mean) * (v - out.mean);
    out.std_error = x.size() > 1 ? std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size())) : 0.0;
    return out;
}

// Monitoring times 0, step, 2 step, ..., terminal with rule thresholds.
struct Schedule {
    std::vector<double> times;
    std::vector<double> upper;
    std::vector<double> lower;
};

Schedule make_schedule(const StoppingRule& rule, double terminal, double step) {
    if (!std::isfinite(terminal) || !(terminal >= 0.0)) {
        throw Error(ErrorKind::Input, "simulation: stopping rule has no finite terminal time");
    }
    const double n_real = std::ceil(terminal / step - 1e-9);
    if (n_real > 1e9) throw Error(ErrorKind::Resource, "simulation: too many monitoring steps");
    const auto n = static_cast<std::size_t>(std::max(0.0, n_real));
    Schedule s;
    s.times.resize(n + 1);
    s.upper.resize(n + 1);
    s.lower.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = std::min(static_cast<double>(i) * step, terminal);
        s.times[i] = t;
        s.upper[i] = rule.upper_at(t);
        s.lower[i] = rule.lower_at(t);
    }
    s.times[n] = terminal;
    return s;
}

double simulation_terminal(const StoppingRule& rule, const HorizonModel& horizon, double cap_eps) {
    return std::min(rule.terminal(), horizon_time_cap(horizon, cap_eps));
}

double draw_delta(const Prior& prior, PathRng& rng) {
    if (const auto* n = std::get_if<NormalConjugate>(&prior.family())) {
        return n->m0 + rng.normal() / std::sqrt(n->r0);
    }
    if (const auto* t = std::get_if<SymmetricTwoPoint>(&prior.family())) {
        return rng.uniform() < 0.5 ? t->delta0 : -t->delta0;
    }
    const auto& m = std::get<DiscreteMixture>(prior.family());
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < m.points.size(); ++i) {
        acc += m.weights[i];
        if (u < acc) return m.points[i];
    }
    return m.points.back();
}

void check_prior_for_mc(const Prior& prior) {
    if (const auto* n = std::get_if<NormalConjugate>(&prior.family())) {
        if (!(n->r0 > 0.0)) throw Error(ErrorKind::Input, "simulation: normal prior needs r0 > 0");
    }
}

// Simulates S from 0 with drift `drift` on the schedule; stops at the first
// monitoring time the rule fires, at `limit`, or at the terminal time.
struct StopState {
    double time;
    double value;
};

StopState run_path(const Schedule& sch, double drift, double limit, PathRng& rng) {
    double s = 0.0;
    const std::size_t last = sch.times.size() - 1;
    for (std::size_t i = 0;; ++i) {
        const double t = sch.times[i];
        if (i == last || t >= limit || s >= sch.upper[i] || s <= sch.lower[i]) return {t, s};
        const double dt = sch.times[i + 1] - t;
        s += drift * dt + std::sqrt(dt) * rng.normal();
    }
}

}  // namespace

// ---------------------------------------------------------------------------

Reward prior_reward(const Prior& prior, double q, const HorizonModel& horizon) {
    check_q(q);
    return [prior, q, horizon](double r, double y) {
        const double h = h_xi(prior, r, y);
        const double f = f_tilde(horizon, std::max(r, 0.0));
        if (infinite_q(q)) return f * std::max(h, 0.0);
        return f * (std::fabs(h) + 2.0 * q * std::max(h, 0.0));
    };
}

Reward standardized_reward(double q) {
    check_q(q);
    return [q](double s, double y) {
        const double factor = 1.0 + 1.0 / s;
        if (infinite_q(q)) return factor * std::max(y, 0.0);
        return factor * (std::fabs(y) + 2.0 * q * std::max(y, 0.0));
    };
}

ValueGrid value_iteration(const Reward& reward, const ValueIterationConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.span > 0.0) || !std::isfinite(cfg.t_end)) {
        throw Error(ErrorKind::Input, "value iteration: require dt > 0, span > 0, finite t_end");
    }
    ValueGrid vg;
    vg.dt = cfg.dt;
    vg.dy = std::sqrt(cfg.dt);
    const double y_max = cfg.y_max > 0.0 ? cfg.y_max : 6.0 * std::sqrt(cfg.span) + cfg.boundary_hint;
    const double n_time = std::llround(cfg.span / cfg.dt);
    const double half = std::ceil(y_max / vg.dy);
    const double width = 2.0 * half + 1.0;
    const double bytes = 8.0 * width * (cfg.keep_full ? n_time + 3.0 : 3.0);
    if (!(n_time >= 1.0) || bytes > static_cast<double>(cfg.memory_budget)) {
        std::ostringstream os;
        os << "value iteration: grid needs " << bytes << " bytes (" << n_time + 1 << " slices of " << width
           << " nodes), budget " << cfg.memory_budget;
        throw Error(ErrorKind::Resource, os.str());
    }
    vg.half_width = static_cast<std::size_t>(half);
    const std::size_t nt = static_cast<std::size_t>(n_time);
    const std::size_t w = static_cast<std::size_t>(width);
    const std::size_t mid = vg.half_width;

    vg.times.resize(nt + 1);
    for (std::size_t i = 0; i <= nt; ++i) vg.times[i] = cfg.t_end - static_cast<double>(i) * cfg.dt;
    vg.upper.assign(nt + 1, 0.0);
    vg.lower.assign(nt + 1, 0.0);
    vg.upper_sentinel.assign(nt + 1, false);
    vg.lower_sentinel.assign(nt + 1, false);

    std::vector<double> next(w);
    std::vector<double> cur(w);
    std::vector<char> stop(w);
    for (std::size_t j = 0; j < w; ++j) {
        next[j] = reward(vg.times[0], vg.y(static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(mid)));
    }
    if (cfg.keep_full) vg.full.push_back(next);

    for (std::size_t i = 1; i <= nt; ++i) {
        const double t = vg.times[i];
        for (std::size_t j = 0; j < w; ++j) {
            const double g = reward(t, vg.y(static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(mid)));
            if (j == 0 || j + 1 == w) {
                cur[j] = g;
                stop[j] = 0;
                continue;
            }
            const double cont = 0.5 * (next[j + 1] + next[j - 1]);
            cur[j] = std::max(g, cont);
            // Zero-reward ties are continuation, not stopping.
            stop[j] = g > 0.0 && cont <= g + 1e-12 * g;
        }

        std::size_t j = mid;
        while (j + 1 < w && !stop[j]) ++j;
        if (j + 1 == w) {
            vg.upper[i] = vg.top();
            vg.upper_sentinel[i] = true;
        } else {
            vg.upper[i] = vg.y(static_cast<std::ptrdiff_t>(j - mid));
            if (j + 3 >= w) vg.near_top = true;
        }
        j = mid;
        while (j > 0 && !stop[j]) --j;
        if (j == 0) {
            vg.lower[i] = -vg.top();
            vg.lower_sentinel[i] = true;
        } else {
            vg.lower[i] = -vg.y(static_cast<std::ptrdiff_t>(mid - j));
            if (j <= 2) vg.near_top = true;
        }

        std::swap(next, cur);
        if (cfg.keep_full) vg.full.push_back(next);
    }
    vg.start_values = next;
    return vg;
}

Boundary extract_boundary(const ValueGrid& vg) {
    Boundary b;
    b.grid = vg.times;
    b.upper = vg.upper;
    b.lower = vg.lower;
    b.lower_kind = LowerKind::Explicit;
    return b;
}

// ---------------------------------------------------------------------------

StoppingRule StoppingRule::from_boundary(Boundary boundary) {
    boundary.validate();
    StoppingRule r;
    r.kind_ = Kind::Curve;
    r.terminal_ = boundary.grid.front();
    r.boundary_ = std::move(boundary);
    return r;
}

StoppingRule StoppingRule::constant(double upper, double lower) {
    if (std::isnan(upper) || std::isnan(lower) || !(lower <= upper)) {
        throw Error(ErrorKind::Input, "constant rule: require lower <= upper");
    }
    StoppingRule r;
    r.kind_ = Kind::Constant;
    r.upper_ = upper;
    r.lower_ = lower;
    r.terminal_ = kInf;
    return r;
}

StoppingRule StoppingRule::immediate() {
    StoppingRule r;
    r.kind_ = Kind::Immediate;
    r.upper_ = -kInf;
    r.lower_ = kInf;
    r.terminal_ = 0.0;
    return r;
}

StoppingRule StoppingRule::never() {
    StoppingRule r;
    r.kind_ = Kind::Never;
    r.upper_ = kInf;
    r.lower_ = -kInf;
    r.terminal_ = kInf;
    return r;
}

double StoppingRule::upper_at(double r) const {
    if (kind_ == Kind::Curve) return boundary_->upper_at(r);
    return upper_;
}

double StoppingRule::lower_at(double r) const {
    if (kind_ == Kind::Curve) return boundary_->lower_at(r);
    return lower_;
}

StoppingRule StoppingRule::scaled(double factor) const {
    if (!(factor > 0.0)) throw Error(ErrorKind::Input, "rule scaling: factor must be positive");
    StoppingRule r = *this;
    if (kind_ == Kind::Curve) {
        for (auto& v : r.boundary_->upper) v *= factor;
        for (auto& v : r.boundary_->lower) v *= factor;
    } else if (kind_ == Kind::Constant) {
        r.upper_ *= factor;
        r.lower_ *= factor;
    }
    return r;
}

void McConfig::validate() const {
    if (n_paths < 2) throw Error(ErrorKind::Input, "simulation: need at least 2 paths");
    if (!(step > 0.0) || !std::isfinite(step)) throw Error(ErrorKind::Input, "simulation: step must be positive");
    if (!(cap_eps > 0.0 && cap_eps < 1.0)) throw Error(ErrorKind::Input, "simulation: cap_eps must lie in (0, 1)");
}

unsigned worker_count(unsigned requested) {
    unsigned n = requested;
    if (n == 0) {
        n = std::max(1u, std::thread::hardware_concurrency());
        if (const char* env = std::getenv("ANSCOMBE_THREADS")) {
            char* end = nullptr;
            const long cap = std::strtol(env, &end, 10);
            if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        }
    }
    return std::max(1u, n);
}

PolicyValueEstimate mc_policy_value(const Prior& prior, const StoppingRule& rule, double q,
                                    const HorizonModel& horizon, const McConfig& cfg) {
    cfg.validate();
    check_q(q);
    check_prior_for_mc(prior);
    const Schedule sch = make_schedule(rule, simulation_terminal(rule, horizon, cfg.cap_eps), cfg.step);
    std::vector<double> payoff(cfg.n_paths);
    for_each_path(cfg.n_paths, worker_count(cfg.threads), [&](std::size_t p) {
        PathRng rng(cfg.seed, p, kTagPolicy);
        const double delta = draw_delta(prior, rng);
        const double n_tilde = sample_standardized_horizon(horizon, 1.0 - rng.uniform());
        const StopState st = run_path(sch, delta, n_tilde, rng);
        const double remaining = std::max(n_tilde - st.time, 0.0);
        if (remaining == 0.0) {
            payoff[p] = 0.0;
            return;
        }
        const int d = optimal_decision(prior, st.time, st.value);
        if (infinite_q(q)) {
            payoff[p] = d > 0 ? delta * remaining : 0.0;
        } else {
            payoff[p] = delta * remaining * ((1.0 + q) * d + q);
        }
    });
    return summarize(payoff, cfg);
}

PolicyValueEstimate mc_transformed_value(const Prior& prior, const StoppingRule& rule, double q,
                                         const HorizonModel& horizon, const McConfig& cfg) {
    cfg.validate();
    check_q(q);
    check_prior_for_mc(prior);
    const double scale = h_scale(prior);
    const Schedule sch = make_schedule(rule, simulation_terminal(rule, horizon, cfg.cap_eps), cfg.step);
    std::vector<double> payoff(cfg.n_paths);
    for_each_path(cfg.n_paths, worker_count(cfg.threads), [&](std::size_t p) {
        PathRng rng(cfg.seed, p, kTagTransformed);
        const StopState st = run_path(sch, 0.0, kInf, rng);
        const double f = f_tilde(horizon, st.time);
        if (f == 0.0) {
            payoff[p] = 0.0;
            return;
        }
        const double h = scale * h_xi(prior, st.time, st.value);
        const double pos = std::max(h, 0.0);
        payoff[p] = infinite_q(q) ? f * pos : f * (std::fabs(h) + 2.0 * q * pos);
    });
    return summarize(payoff, cfg);
}

PolicyValueEstimate mc_mean_stopping_time(const StoppingRule& rule, double cap, const McConfig& cfg,
                                          bool extrapolate) {
    cfg.validate();
    if (!(cap > 0.0) || !std::isfinite(cap)) throw Error(ErrorKind::Input, "stopping time: cap must be positive");
    const Schedule sch = make_schedule(rule, std::min(rule.terminal(), cap), cfg.step);
    const std::size_t last = sch.times.size() - 1;
    std::vector<double> out(cfg.n_paths);
    for_each_path(cfg.n_paths, worker_count(cfg.threads), [&](std::size_t p) {
        PathRng rng(cfg.seed, p, kTagStoppingTime);
        double s = 0.0;
        double fine = -1.0;
        for (std::size_t i = 0;; ++i) {
            const double t = sch.times[i];
            const bool hit = s >= sch.upper[i] || s <= sch.lower[i];
            if (fine < 0.0 && (hit || i == last)) {
                fine = t;
                if (!extrapolate) break;
            }
            if (fine >= 0.0 && ((hit && i % 4 == 0) || i == last)) {
                out[p] = 2.0 * fine - t;
                return;
            }
            const double dt = sch.times[i + 1] - t;
            s += std::sqrt(dt) * rng.normal();
        }
        out[p] = fine;
    });
    return summarize(out, cfg);
}

ThresholdComparison mc_ou_threshold_values(double r0, double w0, const std::vector<double>& thresholds,
                                           double cap, const McConfig& cfg) {
    cfg.validate();
    if (!(r0 >= 0.0)) throw Error(ErrorKind::Input, "OU problem: r0 must be >= 0");
    if (thresholds.empty()) throw Error(ErrorKind::Input, "OU problem: no thresholds");
    for (double a : thresholds) {
        if (!(a > 0.0)) throw Error(ErrorKind::Input, "OU problem: thresholds must be positive");
    }
    if (!(cap > 0.0) || !std::isfinite(cap)) throw Error(ErrorKind::Input, "OU problem: cap must be positive");
    const double alpha = 2.0 * r0 + 1.0;
    const double grow = std::exp(cfg.step);
    const double sd = std::sqrt(std::expm1(2.0 * cfg.step));
    const auto n_steps = static_cast<std::size_t>(std::ceil(cap / cfg.step - 1e-9));
    const std::size_t m = thresholds.size();

    std::vector<std::vector<double>> pay(m, std::vector<double>(cfg.n_paths));
    for_each_path(cfg.n_paths, worker_count(cfg.threads), [&](std::size_t p) {
        PathRng rng(cfg.seed, p, kTagOu);
        double w = w0;
        std::size_t open = m;
        std::vector<char> done(m, 0);
        for (std::size_t i = 0;; ++i) {
            const double t = static_cast<double>(i) * cfg.step;
            for (std::size_t k = 0; k < m; ++k) {
                if (done[k]) continue;
                if (std::fabs(w) >= thresholds[k] || i == n_steps) {
                    pay[k][p] = std::exp(-alpha * t) * std::fabs(w);
                    done[k] = 1;
                    --open;
                }
            }
            if (open == 0) break;
            w = w * grow + sd * rng.normal();
        }
    });

    ThresholdComparison out;
    out.base = summarize(pay[0], cfg);
    std::vector<double> diff(cfg.n_paths);
    for (std::size_t k = 1; k < m; ++k) {
        out.others.push_back(summarize(pay[k], cfg));
        for (std::size_t p = 0; p < cfg.n_paths; ++p) diff[p] = pay[0][p] - pay[k][p];
        const auto d = summarize(diff, cfg);
        out.diff_mean.push_back(d.mean);
        out.diff_se.push_back(d.std_error);
    }
    return out;
}

}  // namespace anscombe
