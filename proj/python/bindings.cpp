#include "anscombe/error.hpp"
#include "anscombe/explicit.hpp"
#include "anscombe/horizon.hpp"
#include "anscombe/io.hpp"
#include "anscombe/normal_conjugate.hpp"
#include "anscombe/oracle.hpp"
#include "anscombe/priors.hpp"
#include "anscombe/volterra.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>

namespace py = pybind11;
using namespace anscombe;

namespace {

py::object py_error_type;

void bind_priors(py::module_& m) {
    py::class_<Prior>(m, "Prior")
        .def_static("normal", &Prior::normal, py::arg("m0"), py::arg("r0"))
        .def_static("two_point", &Prior::two_point, py::arg("delta0"))
        .def_static("mixture", &Prior::mixture, py::arg("points"), py::arg("weights"))
        .def_property_readonly("is_normal", &Prior::is_normal)
        .def_property_readonly("is_symmetric", &Prior::is_symmetric)
        .def_property_readonly("mean", &Prior::mean)
        .def("to_json", [](const Prior& p) { return io::prior_to_json(p).dump(); })
        .def_static("from_json", [](const std::string& s) { return io::prior_from_json(nlohmann::json::parse(s)); })
        .def("__repr__", [](const Prior& p) { return "Prior(" + io::prior_to_json(p).dump() + ")"; });

    m.def("h_xi", &h_xi, py::arg("prior"), py::arg("r"), py::arg("y"));
    m.def("h_scale", &h_scale, py::arg("prior"));
    m.def("optimal_decision", &optimal_decision, py::arg("prior"), py::arg("r"), py::arg("y"));
}

void bind_horizon(py::module_& m) {
    py::class_<HorizonModel>(m, "HorizonModel")
        .def_static("fixed", &HorizonModel::fixed, py::arg("n"))
        .def_static("exponential", &HorizonModel::exponential, py::arg("lam"))
        .def_static("lomax", &HorizonModel::lomax, py::arg("lam"), py::arg("omega"))
        .def_static("table", &HorizonModel::table, py::arg("r"), py::arg("f"))
        .def_property_readonly("is_fixed", &HorizonModel::is_fixed)
        .def("to_json", [](const HorizonModel& h) { return io::horizon_to_json(h).dump(); });

    m.def("horizon_mean", &horizon_mean, py::arg("horizon"));
    m.def("f_tilde", &f_tilde, py::arg("horizon"), py::arg("r"));
    m.def("f_tilde_derivative", &f_tilde_derivative, py::arg("horizon"), py::arg("r"));
    m.def("horizon_time_cap", &horizon_time_cap, py::arg("horizon"), py::arg("eps") = 1e-10);
}

void bind_volterra(py::module_& m) {
    py::enum_<GridShape>(m, "GridShape")
        .value("UNIFORM", GridShape::Uniform)
        .value("SQRT_CLUSTERED", GridShape::SqrtClustered);
    py::enum_<LowerKind>(m, "LowerKind")
        .value("MIRROR", LowerKind::Mirror)
        .value("EXPLICIT", LowerKind::Explicit)
        .value("NONE", LowerKind::None);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init([](std::size_t k, GridShape shape, double r_min) {
                 SolverConfig c;
                 c.k = k;
                 c.grid_shape = shape;
                 c.r_min = r_min;
                 c.validate();
                 return c;
             }),
             py::arg("k") = 2000, py::arg("grid_shape") = GridShape::SqrtClustered, py::arg("r_min") = 1e-4)
        .def_readwrite("k", &SolverConfig::k)
        .def_readwrite("grid_shape", &SolverConfig::grid_shape)
        .def_readwrite("r_min", &SolverConfig::r_min)
        .def_readwrite("inner_tol", &SolverConfig::inner_tol)
        .def_readwrite("fp_max_iter", &SolverConfig::fp_max_iter)
        .def_readwrite("fp_tol", &SolverConfig::fp_tol)
        .def_readwrite("fp_relaxation", &SolverConfig::fp_relaxation)
        .def_readwrite("fp_precondition", &SolverConfig::fp_precondition);

    py::class_<Boundary>(m, "Boundary")
        .def(py::init<>())
        .def_readwrite("grid", &Boundary::grid)
        .def_readwrite("upper", &Boundary::upper)
        .def_readwrite("lower", &Boundary::lower)
        .def_readwrite("lower_kind", &Boundary::lower_kind)
        .def("upper_at", &Boundary::upper_at, py::arg("r"))
        .def("lower_at", &Boundary::lower_at, py::arg("r"))
        .def("validate", &Boundary::validate)
        .def("to_csv", &io::boundary_to_csv)
        .def_static("from_csv", [](const std::string& s) { return io::boundary_from_csv(s); });

    m.def("make_time_grid", &make_time_grid, py::arg("config") = SolverConfig{});
    m.def("solve_symmetric", &solve_symmetric, py::arg("prior"), py::arg("config") = SolverConfig{});
    m.def(
        "solve_fixed_point",
        [](const Prior& p, const SolverConfig& cfg) {
            auto res = solve_fixed_point(p, cfg);
            return py::make_tuple(res.boundary, res.iterations, res.last_change);
        },
        py::arg("prior"), py::arg("config") = SolverConfig{});
    m.def(
        "solve_asymmetric",
        [](const Prior& p, double q, const SolverConfig& cfg) { return solve_asymmetric(p, AsymmetricSpec{q}, cfg); },
        py::arg("prior"), py::arg("q"), py::arg("config") = SolverConfig{});
    m.def("residual", &residual, py::arg("prior"), py::arg("boundary"));
}

void bind_normal(py::module_& m) {
    m.attr("DEFAULT_S_MIN") = kDefaultSMin;
    py::class_<StandardBoundary, std::shared_ptr<StandardBoundary>>(m, "StandardBoundary")
        .def_readonly("grid", &StandardBoundary::grid)
        .def_readonly("upper", &StandardBoundary::upper)
        .def_readonly("lower", &StandardBoundary::lower)
        .def_readonly("lower_kind", &StandardBoundary::lower_kind)
        .def_readonly("q", &StandardBoundary::q)
        .def_property_readonly("s_min", &StandardBoundary::s_min)
        .def("upper_at", &StandardBoundary::upper_at, py::arg("s"))
        .def("lower_at", &StandardBoundary::lower_at, py::arg("s"))
        .def("to_csv", &io::standard_to_csv)
        .def_static("from_csv",
                    [](const std::string& s) { return std::make_shared<StandardBoundary>(io::standard_from_csv(s)); });

    m.def(
        "solve_c",
        [](const SolverConfig& cfg, double s_min) { return std::make_shared<StandardBoundary>(solve_c(cfg, s_min)); },
        py::arg("config") = SolverConfig{}, py::arg("s_min") = kDefaultSMin);
    m.def(
        "solve_cq",
        [](double q, const SolverConfig& cfg, double s_min) {
            return std::make_shared<StandardBoundary>(solve_cq(AsymmetricSpec{q}, cfg, s_min));
        },
        py::arg("q"), py::arg("config") = SolverConfig{}, py::arg("s_min") = kDefaultSMin);
    m.def("c_residual", &c_residual, py::arg("c"));
    m.def("s_of_r", &s_of_r, py::arg("r0"), py::arg("r"));
    m.def("r_of_s", &r_of_s, py::arg("r0"), py::arg("s"));
    m.def("posterior_mean_boundary", &c_to_posterior_mean_boundary, py::arg("c"), py::arg("r0"), py::arg("r"));
    m.def(
        "sum_boundaries",
        [](const StandardBoundary& c, double m0, double r0, double r) {
            const auto p = c_to_sum_boundaries(c, m0, r0, r);
            return py::make_tuple(p.upper, p.lower);
        },
        py::arg("c"), py::arg("m0"), py::arg("r0"), py::arg("r"));
    m.def("pvalue_boundary", &c_to_pvalue_boundary, py::arg("c"), py::arg("m0"), py::arg("r0"), py::arg("r"));
    m.def("asymptotic_cq", &asymptotic_cq, py::arg("s"), py::arg("q"));
    m.def("pvalue_approx", &pvalue_approx, py::arg("r"), py::arg("r0"), py::arg("m0"), py::arg("q"));
    m.def(
        "classical_rule_compare",
        [](double alpha, double r, double q, double r0, double m0, const StandardBoundary* c) {
            const auto cmp = classical_rule_compare(alpha, r, q, r0, m0, c);
            py::dict d;
            d["ordering"] = std::string(to_string(cmp.ordering));
            d["classical"] = cmp.classical;
            d["optimal"] = cmp.optimal;
            return d;
        },
        py::arg("alpha"), py::arg("r"), py::arg("q") = 0.0, py::arg("r0") = 0.0, py::arg("m0") = 0.0,
        py::arg("c") = nullptr);
    m.def(
        "normal_prior_boundary",
        [](std::shared_ptr<StandardBoundary> c, double m0, double r0, const std::vector<double>& r_grid) {
            return NormalPriorBoundary(std::move(c), m0, r0).to_boundary(r_grid);
        },
        py::arg("c"), py::arg("m0"), py::arg("r0"), py::arg("r_grid"));
}

void bind_explicit(py::module_& m) {
    const auto as_dict = [](const ThresholdResult& t) {
        py::dict d;
        d["threshold"] = t.threshold;
        d["residual"] = t.residual;
        d["expected_stop_time"] = t.expected_stop_time ? py::cast(*t.expected_stop_time) : py::none();
        return d;
    };
    m.def("maximin_exp_two_sided", [as_dict](double d) { return as_dict(maximin_exp_two_sided(d)); },
          py::arg("delta0"));
    m.def("maximin_exp_one_sided", [as_dict](double d) { return as_dict(maximin_exp_one_sided(d)); },
          py::arg("delta0"));
    m.def("maximin_exp_one_sided_numeric", &maximin_exp_one_sided_numeric, py::arg("delta0"));
    m.def(
        "one_sided_closed_forms",
        [](double d) {
            const auto f = one_sided_closed_forms(d);
            return py::make_tuple(f.log_ratio, f.log_sum);
        },
        py::arg("delta0"));
    m.def("lomax_threshold", [as_dict](double r0) { return as_dict(lomax_threshold(r0)); }, py::arg("r0"));
    m.def("lomax_equation", &lomax_equation, py::arg("r0"), py::arg("w"));
    m.def("lomax_boundary", &lomax_boundary, py::arg("r0"), py::arg("s"));
}

void bind_oracle(py::module_& m) {
    m.def(
        "value_iteration_boundary",
        [](const Prior& prior, double q, const HorizonModel& horizon, double dt, double t_end, double span) {
            ValueIterationConfig vc;
            vc.dt = dt;
            vc.t_end = t_end;
            vc.span = span > 0.0 ? span : t_end - dt;
            py::gil_scoped_release release;
            return extract_boundary(value_iteration(prior_reward(prior, q, horizon), vc));
        },
        py::arg("prior"), py::arg("q") = 0.0, py::arg("horizon") = HorizonModel::fixed(1.0), py::arg("dt") = 1e-4,
        py::arg("t_end") = 1.0, py::arg("span") = 0.0);

    py::class_<McConfig>(m, "McConfig")
        .def(py::init([](std::size_t n_paths, double step, std::uint64_t seed, unsigned threads) {
                 McConfig c;
                 c.n_paths = n_paths;
                 c.step = step;
                 c.seed = seed;
                 c.threads = threads;
                 c.validate();
                 return c;
             }),
             py::arg("n_paths") = 100000, py::arg("step") = 1e-4, py::arg("seed") = 1, py::arg("threads") = 0)
        .def_readwrite("n_paths", &McConfig::n_paths)
        .def_readwrite("step", &McConfig::step)
        .def_readwrite("seed", &McConfig::seed)
        .def_readwrite("threads", &McConfig::threads);

    py::class_<PolicyValueEstimate>(m, "Estimate")
        .def_readonly("mean", &PolicyValueEstimate::mean)
        .def_readonly("std_error", &PolicyValueEstimate::std_error)
        .def_readonly("n_paths", &PolicyValueEstimate::n_paths)
        .def_readonly("seed", &PolicyValueEstimate::seed)
        .def_readonly("step", &PolicyValueEstimate::step)
        .def("__repr__", [](const PolicyValueEstimate& e) {
            return "Estimate(mean=" + io::format_double(e.mean) + ", std_error=" + io::format_double(e.std_error) + ")";
        });

    py::class_<StoppingRule>(m, "StoppingRule")
        .def_static("from_boundary", &StoppingRule::from_boundary, py::arg("boundary"))
        .def_static("constant", &StoppingRule::constant, py::arg("upper"), py::arg("lower"))
        .def_static("immediate", &StoppingRule::immediate)
        .def_static("never", &StoppingRule::never)
        .def("upper_at", &StoppingRule::upper_at)
        .def("lower_at", &StoppingRule::lower_at)
        .def("scaled", &StoppingRule::scaled, py::arg("factor"));

    m.def(
        "mc_policy_value",
        [](const Prior& p, const StoppingRule& rule, double q, const HorizonModel& h, const McConfig& cfg) {
            py::gil_scoped_release release;
            return mc_policy_value(p, rule, q, h, cfg);
        },
        py::arg("prior"), py::arg("rule"), py::arg("q") = 0.0, py::arg("horizon") = HorizonModel::fixed(1.0),
        py::arg("config") = McConfig{});
    m.def(
        "mc_transformed_value",
        [](const Prior& p, const StoppingRule& rule, double q, const HorizonModel& h, const McConfig& cfg) {
            py::gil_scoped_release release;
            return mc_transformed_value(p, rule, q, h, cfg);
        },
        py::arg("prior"), py::arg("rule"), py::arg("q") = 0.0, py::arg("horizon") = HorizonModel::fixed(1.0),
        py::arg("config") = McConfig{});
    m.def(
        "mc_mean_stopping_time",
        [](const StoppingRule& rule, double cap, const McConfig& cfg, bool extrapolate) {
            py::gil_scoped_release release;
            return mc_mean_stopping_time(rule, cap, cfg, extrapolate);
        },
        py::arg("rule"), py::arg("cap"), py::arg("config") = McConfig{}, py::arg("extrapolate") = true);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Optimal stopping boundaries for sequential clinical trials";

    py_error_type = py::exception<Error>(m, "AnscombeError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
            PyErr_SetString(py_error_type.ptr(), msg.c_str());
        }
    });

    bind_priors(m);
    bind_horizon(m);
    bind_volterra(m);
    bind_normal(m);
    bind_explicit(m);
    bind_oracle(m);
}
