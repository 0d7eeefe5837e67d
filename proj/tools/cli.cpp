#include "cli.hpp"

#include "anscombe/error.hpp"
#include "anscombe/explicit.hpp"
#include "anscombe/horizon.hpp"
#include "anscombe/io.hpp"
#include "anscombe/normal_conjugate.hpp"
#include "anscombe/numerics.hpp"
#include "anscombe/oracle.hpp"
#include "anscombe/plot.hpp"
#include "anscombe/priors.hpp"
#include "anscombe/volterra.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <memory>
#include <optional>

namespace anscombe::cli {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

json number_or_string(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

json load_json(const std::string& path) {
    const std::string text = io::read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Input, "'" + path + "': " + e.what());
    }
}

Prior load_prior(const std::string& path) { return io::prior_from_json(load_json(path)); }

HorizonModel load_horizon(const std::string& path) {
    if (path.empty()) return HorizonModel::fixed(1.0);
    return io::horizon_from_json(load_json(path));
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

bool is_standard_csv(std::string_view text) {
    const auto pos = text.find_first_not_of(" \t\r\n");
    return pos != std::string_view::npos && text.substr(pos, 2) == "s,";
}

void write_plot(const std::string& plot_path, const std::string& csv, const std::string& csv_path,
                const plot::Axes& axes) {
    if (plot_path.empty()) return;
    const auto curves = plot::curves_from_csv(csv, stem(csv_path));
    io::write_file_atomic(plot_path, plot::render_svg(curves, axes));
}

void write_with_sidecar(const std::string& path, const std::string& csv, const json& meta) {
    io::write_file_atomic(path, csv);
    io::write_file_atomic(path + ".json", io::dump_json(meta));
}

// Descending r grid on which a c(s) curve with the given s_min is defined
// for precision r0.
std::vector<double> r_grid_for(const StandardBoundary& c, double r0, SolverConfig cfg) {
    const double r_lo = (r0 + 1.0) / -c.s_min() - r0;
    if (!(r_lo < 1.0)) throw Error(ErrorKind::Range, "c(s) does not reach far enough back for this r0");
    cfg.r_min = std::max(cfg.r_min, r_lo * (1.0 + 1e-12) + 1e-15);
    return make_time_grid(cfg);
}

struct CommonOptions {
    std::string prior;
    std::string horizon;
    std::string q = "0";
    std::size_t grid = 2000;
    double smin = kDefaultSMin;
    double m0 = 0.0;
    double r0 = 0.0;
    std::size_t paths = 100000;
    double step = 1e-4;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string out;
    std::string plot;
};

SolverConfig solver_config(const CommonOptions& o) {
    SolverConfig cfg;
    cfg.k = o.grid;
    cfg.validate();
    return cfg;
}

int run_boundary(const CommonOptions& o, const std::string& method, std::ostream& out) {
    const Prior prior = load_prior(o.prior);
    const double q = io::parse_q(o.q);
    const SolverConfig cfg = solver_config(o);
    json meta = {{"command", "boundary"}, {"prior", io::prior_to_json(prior)}, {"q", number_or_string(q)},
                 {"grid", cfg.k},        {"method", method}};
    std::string csv;
    double resid = 0.0;
    plot::Axes axes;
    if (prior.is_normal()) {
        if (method != "trapezoid") throw Error(ErrorKind::Input, "normal priors use the trapezoid solver");
        const StandardBoundary c = q == 0.0 ? solve_c(cfg, o.smin) : solve_cq(AsymmetricSpec{q}, cfg, o.smin);
        resid = c_residual(c);
        csv = io::standard_to_csv(c);
        meta["s_min"] = o.smin;
        axes.x_label = "s";
        axes.y_label = "c(s)";
    } else {
        Boundary b;
        if (q == 0.0 && prior.is_symmetric()) {
            if (method == "fixed-point") {
                b = solve_fixed_point(prior, cfg).boundary;
            } else {
                b = solve_symmetric(prior, cfg);
            }
            resid = residual(prior, b);
        } else {
            if (method != "trapezoid") throw Error(ErrorKind::Input, "asymmetric problems use the trapezoid solver");
            b = solve_asymmetric(prior, AsymmetricSpec{q}, cfg);
        }
        csv = io::boundary_to_csv(b);
        axes.y_label = "b(r)";
    }
    meta["residual"] = resid;
    write_with_sidecar(o.out, csv, meta);
    write_plot(o.plot, csv, o.out, axes);
    out << io::dump_json({{"out", o.out}, {"residual", resid}});
    return kOk;
}

int run_transform(const CommonOptions& o, const std::string& c_path, const std::string& target,
                  double r_min, std::ostream& out) {
    const StandardBoundary c = io::standard_from_csv(io::read_file(c_path));
    const double q = c.lower_kind == LowerKind::None ? kInf : io::parse_q(o.q);
    SolverConfig cfg = solver_config(o);
    cfg.r_min = r_min;
    const auto grid = r_grid_for(c, o.r0, cfg);

    Boundary b;
    if (target == "sum") {
        b = NormalPriorBoundary(std::make_shared<const StandardBoundary>(c), o.m0, o.r0).to_boundary(grid);
    } else if (target == "mean" || target == "pvalue") {
        if (target == "mean" && !(o.r0 > 0.0)) throw Error(ErrorKind::Domain, "mean target needs r0 > 0");
        const bool mirror = c.lower_kind == LowerKind::Mirror && (target == "mean" || o.m0 == 0.0);
        b.grid = grid;
        b.lower_kind = mirror ? LowerKind::Mirror : c.lower_kind == LowerKind::None ? LowerKind::None
                                                                                    : LowerKind::Explicit;
        for (const double r : grid) {
            if (target == "mean") {
                const double scale = std::sqrt(o.r0 + 1.0);
                b.upper.push_back(c.upper_at(s_of_r(o.r0, r)) / scale);
                if (b.lower_kind == LowerKind::Explicit) b.lower.push_back(c.lower_at(s_of_r(o.r0, r)) / scale);
            } else {
                b.upper.push_back(c_to_pvalue_boundary(c, o.m0, o.r0, r));
                if (b.lower_kind == LowerKind::Explicit) {
                    b.lower.push_back(numerics::std_normal_sf(c_to_sum_boundaries(c, o.m0, o.r0, r).lower / std::sqrt(r)));
                }
            }
        }
    } else {
        throw Error(ErrorKind::Input, "unknown target '" + target + "'");
    }
    const std::string csv = io::boundary_to_csv(b);
    const json meta = {{"command", "transform"}, {"target", target},          {"m0", o.m0},
                       {"r0", o.r0},             {"q", number_or_string(q)}, {"s_min", c.s_min()}};
    write_with_sidecar(o.out, csv, meta);
    plot::Axes axes;
    axes.y_label = target == "pvalue" ? "b_p(r)" : target == "mean" ? "b_M(r)" : "b_S(r)";
    axes.log_x = target == "pvalue";
    write_plot(o.plot, csv, o.out, axes);
    out << io::dump_json({{"out", o.out}, {"rows", grid.size()}});
    return kOk;
}

int run_asymptotic(const CommonOptions& o, const std::vector<double>& s_values,
                   const std::vector<double>& r_values, std::ostream& out) {
    const double q = io::parse_q(o.q);
    if (s_values.empty() && r_values.empty()) throw Error(ErrorKind::Input, "asymptotic needs --s or --r values");
    json rows = json::array();
    for (const double s : s_values) rows.push_back({{"s", s}, {"c", asymptotic_cq(s, q)}});
    for (const double r : r_values) {
        rows.push_back({{"r", r}, {"b_p", pvalue_approx(r, o.r0, o.m0, q)}});
    }
    const json report = {{"q", number_or_string(q)}, {"m0", o.m0}, {"r0", o.r0}, {"values", rows}};
    if (!o.out.empty()) io::write_file_atomic(o.out, io::dump_json(report));
    out << io::dump_json(report);
    return kOk;
}

int run_explicit(const CommonOptions& o, const std::string& kind, double delta0, std::ostream& out) {
    json report;
    if (kind == "two-sided") {
        report = io::threshold_to_json(maximin_exp_two_sided(delta0));
    } else if (kind == "one-sided") {
        report = io::threshold_to_json(maximin_exp_one_sided(delta0));
        const auto forms = one_sided_closed_forms(delta0);
        report["closed_form_log_ratio"] = forms.log_ratio;
        report["closed_form_log_sum"] = forms.log_sum;
        report["numeric_root"] = maximin_exp_one_sided_numeric(delta0);
    } else if (kind == "lomax") {
        report = io::threshold_to_json(lomax_threshold(o.r0));
        report["r0"] = o.r0;
    } else {
        throw Error(ErrorKind::Input, "unknown explicit kind '" + kind + "'");
    }
    report["kind"] = kind;
    if (kind != "lomax") report["delta0"] = delta0;
    if (!o.out.empty()) io::write_file_atomic(o.out, io::dump_json(report));
    out << io::dump_json(report);
    return kOk;
}

int run_oracle(const CommonOptions& o, double t_end, double span, std::ostream& out) {
    const Prior prior = load_prior(o.prior);
    const HorizonModel horizon = load_horizon(o.horizon);
    const double q = io::parse_q(o.q);
    ValueIterationConfig vc;
    vc.dt = o.step;
    json meta = {{"command", "oracle"}, {"prior", io::prior_to_json(prior)}, {"q", number_or_string(q)},
                 {"dt", o.step}};
    std::string csv;
    plot::Axes axes;
    ValueGrid vg;
    if (prior.is_normal()) {
        vc.t_end = -1.0;
        vc.span = span > 0.0 ? span : 1.0;
        vc.boundary_hint = 2.0;
        vg = value_iteration(standardized_reward(q), vc);
        const Boundary b = extract_boundary(vg);
        StandardBoundary c;
        c.grid = b.grid;
        c.upper = b.upper;
        c.lower = b.lower;
        c.lower_kind = LowerKind::Explicit;
        c.q = q;
        csv = io::standard_to_csv(c);
        axes.x_label = "s";
        axes.y_label = "c(s)";
    } else {
        vc.t_end = t_end > 0.0 ? t_end : horizon.is_fixed() ? 1.0 : horizon_time_cap(horizon, 1e-6);
        vc.span = span > 0.0 ? span : vc.t_end - o.step;
        vg = value_iteration(prior_reward(prior, q, horizon), vc);
        csv = io::boundary_to_csv(extract_boundary(vg));
        axes.y_label = "b(r)";
        meta["horizon"] = io::horizon_to_json(horizon);
    }
    meta["t_end"] = vc.t_end;
    meta["span"] = vc.span;
    meta["half_width"] = vg.half_width;
    meta["near_top"] = vg.near_top;
    std::size_t sentinels = 0;
    for (std::size_t i = 0; i < vg.times.size(); ++i) sentinels += vg.upper_sentinel[i] + vg.lower_sentinel[i];
    meta["sentinel_nodes"] = sentinels;
    write_with_sidecar(o.out, csv, meta);
    write_plot(o.plot, csv, o.out, axes);
    out << io::dump_json({{"out", o.out}, {"near_top", vg.near_top}, {"slices", vg.times.size()}});
    return kOk;
}

int run_simulate(const CommonOptions& o, const std::string& boundary_path, std::optional<double> threshold,
                 std::ostream& out) {
    const Prior prior = load_prior(o.prior);
    const HorizonModel horizon = load_horizon(o.horizon);
    const double q = io::parse_q(o.q);
    McConfig mc;
    mc.n_paths = o.paths;
    mc.step = o.step;
    mc.seed = o.seed;
    mc.threads = o.threads;
    mc.validate();

    std::optional<StoppingRule> rule;
    if (threshold) {
        if (!boundary_path.empty()) throw Error(ErrorKind::Input, "give either --boundary or --threshold");
        rule = StoppingRule::constant(*threshold, q == kInf ? -kInf : -*threshold);
    } else if (!boundary_path.empty()) {
        const std::string text = io::read_file(boundary_path);
        if (is_standard_csv(text)) {
            const auto* n = std::get_if<NormalConjugate>(&prior.family());
            if (n == nullptr) throw Error(ErrorKind::Input, "a c(s) boundary needs a normal prior");
            auto c = std::make_shared<const StandardBoundary>(io::standard_from_csv(text));
            const auto grid = r_grid_for(*c, n->r0, solver_config(o));
            rule = StoppingRule::from_boundary(NormalPriorBoundary(c, n->m0, n->r0).to_boundary(grid));
        } else {
            rule = StoppingRule::from_boundary(io::boundary_from_csv(text));
        }
    } else {
        throw Error(ErrorKind::Input, "simulate needs --boundary or --threshold");
    }

    const auto policy = mc_policy_value(prior, *rule, q, horizon, mc);
    const auto transformed = mc_transformed_value(prior, *rule, q, horizon, mc);
    const double se = std::hypot(policy.std_error, transformed.std_error);
    const json report = {{"prior", io::prior_to_json(prior)},
                         {"horizon", io::horizon_to_json(horizon)},
                         {"q", number_or_string(q)},
                         {"policy_value", io::estimate_to_json(policy)},
                         {"transformed_value", io::estimate_to_json(transformed)},
                         {"z", se > 0.0 ? (policy.mean - transformed.mean) / se : 0.0}};
    if (!o.out.empty()) io::write_file_atomic(o.out, io::dump_json(report));
    out << io::dump_json(report);
    return kOk;
}

int run_compare(const CommonOptions& o, double alpha, double r, const std::string& c_path, std::ostream& out) {
    const double q = io::parse_q(o.q);
    std::optional<StandardBoundary> c;
    if (!c_path.empty()) c = io::standard_from_csv(io::read_file(c_path));
    const auto cmp = classical_rule_compare(alpha, r, q, o.r0, o.m0, c ? &*c : nullptr);
    const json report = {{"alpha", alpha},
                         {"r", r},
                         {"q", number_or_string(q)},
                         {"r0", o.r0},
                         {"m0", o.m0},
                         {"classical_threshold", cmp.classical},
                         {"optimal_threshold", cmp.optimal},
                         {"ordering", std::string(to_string(cmp.ordering))}};
    if (!o.out.empty()) io::write_file_atomic(o.out, io::dump_json(report));
    out << io::dump_json(report);
    return kOk;
}

int run_plot(const std::vector<std::string>& files, const plot::Axes& axes, const std::string& path,
             std::ostream& out) {
    std::vector<plot::Curve> curves;
    for (const auto& f : files) {
        auto more = plot::curves_from_csv(io::read_file(f), stem(f));
        curves.insert(curves.end(), more.begin(), more.end());
    }
    const std::string svg = plot::render_svg(curves, axes);
    io::write_file_atomic(path, svg);
    out << io::dump_json({{"out", path}, {"curves", curves.size()}});
    return kOk;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Domain:
        case ErrorKind::Input:
        case ErrorKind::Range: return kValidation;
        case ErrorKind::Io: return kIo;
        default: return kSolver;
    }
}

int report_error(std::ostream& err, std::string_view kind, const std::string& message, int code,
                 std::optional<std::size_t> step = std::nullopt) {
    json e = {{"kind", kind}, {"message", message}, {"exit_code", code}};
    if (step) e["step"] = *step;
    err << json({{"error", e}}).dump() << "\n";
    return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal stopping boundaries for sequential clinical trials", "anscombe"};
    app.require_subcommand(1);

    CommonOptions o;
    std::function<int()> action;

    const auto add_q = [&](CLI::App* sub) { sub->add_option("--q", o.q, "outside-trial weight q (number or inf)"); };
    const auto add_out = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--out", o.out, "output path");
        if (required) opt->required();
    };
    const auto add_mc = [&](CLI::App* sub) {
        sub->add_option("--paths", o.paths, "Monte Carlo paths")->check(CLI::PositiveNumber);
        sub->add_option("--step", o.step, "monitoring step in r")->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--threads", o.threads, "worker threads (0: ANSCOMBE_THREADS or hardware)");
    };

    std::string method = "trapezoid";
    auto* boundary = app.add_subcommand("boundary", "solve the stopping boundary for a prior");
    boundary->add_option("--prior", o.prior, "prior JSON file")->required();
    add_q(boundary);
    boundary->add_option("--grid", o.grid, "number of time-grid points")->check(CLI::Range(2, 10000000));
    boundary->add_option("--smin", o.smin, "earliest standardized time (normal priors)");
    boundary->add_option("--method", method, "trapezoid or fixed-point")
        ->check(CLI::IsMember({"trapezoid", "fixed-point"}));
    add_out(boundary, true);
    boundary->add_option("--plot", o.plot, "SVG of the boundary");
    boundary->callback([&] { action = [&] { return run_boundary(o, method, out); }; });

    std::string c_path;
    std::string target = "sum";
    double r_min = 1e-4;
    auto* transform = app.add_subcommand("transform", "map c(s) to a conjugate-normal prior");
    transform->add_option("--c", c_path, "c(s) CSV")->required();
    transform->add_option("--m0", o.m0, "prior mean");
    transform->add_option("--r0", o.r0, "prior precision")->required()->check(CLI::NonNegativeNumber);
    transform->add_option("--target", target, "sum, mean or pvalue")->check(CLI::IsMember({"sum", "mean", "pvalue"}));
    transform->add_option("--grid", o.grid, "number of r grid points")->check(CLI::Range(2, 10000000));
    transform->add_option("--rmin", r_min, "smallest r")->check(CLI::PositiveNumber);
    add_q(transform);
    add_out(transform, true);
    transform->add_option("--plot", o.plot, "SVG of the transformed boundary");
    transform->callback([&] { action = [&] { return run_transform(o, c_path, target, r_min, out); }; });

    std::vector<double> s_values;
    std::vector<double> r_values;
    auto* asymptotic = app.add_subcommand("asymptotic", "large-|s| boundary and small-r p-value forms");
    add_q(asymptotic);
    asymptotic->add_option("--s", s_values, "standardized times");
    asymptotic->add_option("--r", r_values, "information fractions for the p-value form");
    asymptotic->add_option("--m0", o.m0, "prior mean");
    asymptotic->add_option("--r0", o.r0, "prior precision")->check(CLI::NonNegativeNumber);
    add_out(asymptotic, false);
    asymptotic->callback([&] { action = [&] { return run_asymptotic(o, s_values, r_values, out); }; });

    std::string kind = "two-sided";
    double delta0 = 1.0;
    auto* explicit_cmd = app.add_subcommand("explicit", "closed-form thresholds");
    explicit_cmd->add_option("--kind", kind, "two-sided, one-sided or lomax")
        ->check(CLI::IsMember({"two-sided", "one-sided", "lomax"}));
    explicit_cmd->add_option("--delta0", delta0, "maximin effect size")->check(CLI::PositiveNumber);
    explicit_cmd->add_option("--r0", o.r0, "prior precision (lomax)")->check(CLI::PositiveNumber);
    add_out(explicit_cmd, false);
    explicit_cmd->callback([&] { action = [&] { return run_explicit(o, kind, delta0, out); }; });

    double t_end = 0.0;
    double span = 0.0;
    auto* oracle = app.add_subcommand("oracle", "binomial-tree value iteration");
    oracle->add_option("--prior", o.prior, "prior JSON file")->required();
    oracle->add_option("--horizon", o.horizon, "horizon JSON file");
    add_q(oracle);
    oracle->add_option("--step", o.step, "time step")->check(CLI::PositiveNumber);
    oracle->add_option("--t-end", t_end, "terminal time (default 1, or the horizon cap)");
    oracle->add_option("--span", span, "length of the solved time window");
    add_out(oracle, true);
    oracle->add_option("--plot", o.plot, "SVG of the extracted boundary");
    oracle->callback([&] { action = [&] { return run_oracle(o, t_end, span, out); }; });

    std::string boundary_path;
    std::optional<double> threshold;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo value of a stopping rule");
    simulate->add_option("--prior", o.prior, "prior JSON file")->required();
    simulate->add_option("--horizon", o.horizon, "horizon JSON file");
    simulate->add_option("--boundary", boundary_path, "boundary CSV (r or s schema)");
    simulate->add_option("--threshold", threshold, "constant threshold |S| >= a")->check(CLI::PositiveNumber);
    simulate->add_option("--grid", o.grid, "r grid for c(s) boundaries")->check(CLI::Range(2, 10000000));
    add_q(simulate);
    add_mc(simulate);
    add_out(simulate, false);
    simulate->callback([&] { action = [&] { return run_simulate(o, boundary_path, threshold, out); }; });

    double alpha = 0.025;
    double r_point = 0.0;
    std::string compare_c;
    auto* compare = app.add_subcommand("compare-classical", "optimal vs fixed-level p-value threshold");
    compare->add_option("--alpha", alpha, "classical one-sided level")->check(CLI::Range(0.0, 1.0));
    compare->add_option("--r", r_point, "information fraction")->required()->check(CLI::PositiveNumber);
    compare->add_option("--r0", o.r0, "prior precision")->check(CLI::NonNegativeNumber);
    compare->add_option("--m0", o.m0, "prior mean");
    compare->add_option("--c", compare_c, "solved c(s) CSV; default is the small-r approximation");
    add_q(compare);
    add_out(compare, false);
    compare->callback([&] { action = [&] { return run_compare(o, alpha, r_point, compare_c, out); }; });

    std::vector<std::string> plot_files;
    plot::Axes axes;
    auto* plot_cmd = app.add_subcommand("plot", "render boundary CSVs as SVG");
    plot_cmd->add_option("files", plot_files, "boundary CSV files");
    plot_cmd->add_option("--x-label", axes.x_label, "x axis label");
    plot_cmd->add_option("--y-label", axes.y_label, "y axis label");
    plot_cmd->add_flag("--log-x", axes.log_x, "logarithmic x axis");
    add_out(plot_cmd, true);
    plot_cmd->callback([&] { action = [&] { return run_plot(plot_files, axes, o.out, out); }; });

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        return report_error(err, "input", e.what(), kValidation);
    }

    try {
        return action();
    } catch (const SolverError& e) {
        return report_error(err, to_string(e.kind()), e.what(), exit_code_for(e.kind()), e.step());
    } catch (const Error& e) {
        return report_error(err, to_string(e.kind()), e.what(), exit_code_for(e.kind()));
    } catch (const std::filesystem::filesystem_error& e) {
        return report_error(err, "io", e.what(), kIo);
    } catch (const std::exception& e) {
        return report_error(err, "internal", e.what(), kSolver);
    }
}

}  // namespace anscombe::cli
