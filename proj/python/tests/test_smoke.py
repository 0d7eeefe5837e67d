import math

import pytest

import anscombe as ac


def test_two_point_boundary_collapses_at_one():
    b = ac.solve_symmetric(ac.Prior.two_point(1.0), ac.SolverConfig(k=300))
    assert b.grid[0] == 1.0
    assert b.upper[0] == 0.0
    assert b.upper_at(0.5) == pytest.approx(0.528, abs=5e-3)
    assert ac.residual(ac.Prior.two_point(1.0), b) < 1e-8


def test_boundary_csv_round_trip():
    b = ac.solve_symmetric(ac.Prior.two_point(1.0), ac.SolverConfig(k=50))
    back = ac.Boundary.from_csv(b.to_csv())
    assert back.grid == b.grid
    assert back.upper == b.upper
    assert back.lower_kind == ac.LowerKind.MIRROR


def test_asymmetric_infinite_q_has_no_lower_curve():
    b = ac.solve_asymmetric(ac.Prior.two_point(1.0), math.inf, ac.SolverConfig(k=100))
    assert b.lower_kind == ac.LowerKind.NONE
    assert b.lower_at(0.5) == -math.inf


def test_normal_prior_pipeline():
    c = ac.solve_c(ac.SolverConfig(k=300), s_min=-1e3)
    assert c.upper_at(-1.0) == 0.0
    assert c.upper_at(-999.0) / ac.asymptotic_cq(-999.0, 0.0) == pytest.approx(1.0, abs=0.03)
    grid = ac.make_time_grid(ac.SolverConfig(k=100, r_min=2e-3))
    b = ac.normal_prior_boundary(c, 0.0, 1.0, grid)
    b.validate()
    p = ac.pvalue_boundary(c, 0.0, 0.0, 0.005)
    assert p == pytest.approx(0.005, rel=0.15)


def test_classical_comparison():
    res = ac.classical_rule_compare(0.025, 1e-5)
    assert res["ordering"] == "classical_accepts_more"
    assert res["classical"] == pytest.approx(0.000625, rel=1e-15)


def test_explicit_thresholds():
    assert ac.lomax_threshold(1.0)["threshold"] == pytest.approx(0.76422590101316823, rel=1e-12)
    log_ratio, log_sum = ac.one_sided_closed_forms(1.0)
    assert log_ratio == pytest.approx(log_sum, abs=1e-12)
    assert ac.maximin_exp_two_sided(1.0)["expected_stop_time"] > 0.0


def test_horizon_and_errors():
    h = ac.HorizonModel.exponential(10.0)
    assert ac.f_tilde(h, 1.0) == pytest.approx(math.exp(-1.0))
    with pytest.raises(ac.AnscombeError, match="input"):
        ac.Prior.two_point(-1.0)
    with pytest.raises(ValueError):
        ac.HorizonModel.lomax(1.0, 0.5)


def test_monte_carlo_is_seed_deterministic():
    prior = ac.Prior.two_point(1.0)
    rule = ac.StoppingRule.constant(0.6, -0.6)
    cfg = ac.McConfig(n_paths=2000, step=1e-3, seed=5)
    a = ac.mc_policy_value(prior, rule, config=cfg)
    b = ac.mc_policy_value(prior, rule, config=cfg)
    assert a.mean == b.mean
    t = ac.mc_transformed_value(prior, rule, config=cfg)
    assert abs(a.mean - t.mean) < 4.0 * math.hypot(a.std_error, t.std_error)
