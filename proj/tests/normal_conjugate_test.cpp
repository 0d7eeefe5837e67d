#include "anscombe/error.hpp"
#include "anscombe/normal_conjugate.hpp"
#include "anscombe/numerics.hpp"

#include "doctest.h"

#include <cmath>
#include <memory>

using namespace anscombe;

namespace {

// Integral of g(x) times the N(mean, var) density over [a, b] by composite Simpson.
template <class G>
double gaussian_integral(double mean, double var, double a, double b, G&& g) {
    const int n = 20000;
    const double h = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = a + h * i;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * g(x) * std::exp(-0.5 * (x - mean) * (x - mean) / var);
    }
    return sum * h / 3.0 / std::sqrt(2.0 * M_PI * var);
}

const StandardBoundary& shared_c() {
    static const StandardBoundary c = solve_c(SolverConfig{});
    return c;
}

SolverConfig small_config(std::size_t k) {
    SolverConfig cfg;
    cfg.k = k;
    return cfg;
}

}  // namespace

TEST_SUITE("normal_conjugate") {

TEST_CASE("s grid runs from -1 down to s_min") {
    const auto g = make_s_grid(small_config(50), -100.0);
    CHECK(g.front() == -1.0);
    CHECK(g.back() == doctest::Approx(-100.0));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] < g[i - 1]);
    CHECK_THROWS_AS(make_s_grid(small_config(50), -0.5), Error);
}

TEST_CASE("Gaussian tail expectations match quadrature") {
    const double s = -3.0;
    const double y = 0.4;
    const double u = -1.7;
    const double z = 1.1;
    const double var = u - s;
    const double reach = 14.0 * std::sqrt(var);
    const auto id = [](double x) { return x; };
    CHECK(standard_upper_tail(s, y, u, z) == doctest::Approx(gaussian_integral(y, var, z, y + reach, id)).epsilon(1e-10));
    CHECK(standard_lower_tail(s, y, u, -z) ==
          doctest::Approx(gaussian_integral(y, var, y - reach, -z, id)).epsilon(1e-10));
}

TEST_CASE("c(s): frozen values, terminal collapse and growth") {
    const auto& c = shared_c();
    CHECK(c.upper.front() == 0.0);
    CHECK(c.s_min() == doctest::Approx(kDefaultSMin));
    CHECK(c.upper_at(-2.0) == doctest::Approx(0.96708621029589248).epsilon(1e-9));
    CHECK(c.upper_at(-10.0) == doctest::Approx(4.5403918778768144).epsilon(1e-9));
    CHECK(c.upper_at(-100.0) == doctest::Approx(23.260713726663248).epsilon(1e-9));
    for (std::size_t i = 1; i < c.grid.size(); ++i) CHECK(c.upper[i] > c.upper[i - 1]);
    CHECK(c_residual(c) <= 1e-10);
    CHECK_THROWS_AS(c.upper_at(-2e4), Error);
    CHECK_THROWS_AS(c.upper_at(-0.5), Error);
}

TEST_CASE("c(s) approaches the large-|s| asymptote") {
    const auto& c = shared_c();
    for (auto [s, tol] : {std::pair{-1e2, 0.05}, {-1e3, 0.03}, {-9999.0, 0.02}}) {
        CHECK(std::fabs(c.upper_at(s) / asymptotic_cq(s, 0.0) - 1.0) <= tol);
    }
}

TEST_CASE("q-weighted c: q = 0 reproduces c, q = inf drops the lower curve") {
    const auto cfg = small_config(400);
    const auto c = solve_c(cfg, -100.0);
    const auto c0 = solve_cq(AsymmetricSpec::finite(0.0), cfg, -100.0);
    for (std::size_t i = 0; i < c.grid.size(); ++i) CHECK(std::fabs(c0.upper[i] - c.upper[i]) <= 1e-6);
    const auto c1 = solve_cq(AsymmetricSpec::finite(1.0), cfg, -100.0);
    CHECK(c1.lower_kind == LowerKind::Explicit);
    for (std::size_t i = 1; i < c.grid.size(); ++i) {
        CHECK(c1.upper[i] <= c.upper[i] + 1e-12);
        CHECK(c1.lower[i] <= -c.upper[i] + 1e-12);
    }
    CHECK(c_residual(c1) <= 1e-10);
    const auto ci = solve_cq(AsymmetricSpec::infinite(), cfg, -100.0);
    CHECK(ci.lower_kind == LowerKind::None);
}

TEST_CASE("q = 1 frozen values") {
    const auto cq = solve_cq(AsymmetricSpec::finite(1.0), SolverConfig{});
    CHECK(cq.upper_at(-10.0) == doctest::Approx(4.1766022775292218).epsilon(1e-9));
    CHECK(cq.lower_at(-10.0) == doctest::Approx(-5.1911422318709262).epsilon(1e-9));
}

TEST_CASE("time map is an involution pair") {
    for (double r0 : {0.0, 0.1, 1.0, 7.0}) {
        for (double r : {1e-4, 0.3, 1.0}) CHECK(r_of_s(r0, s_of_r(r0, r)) == doctest::Approx(r).epsilon(1e-12));
        CHECK(s_of_r(r0, 1.0) == doctest::Approx(-1.0));
    }
    CHECK(std::isinf(s_of_r(0.0, 0.0)));
    CHECK_THROWS_AS(s_of_r(-1.0, 0.5), Error);
}

TEST_CASE("boundary transforms are mutually consistent") {
    const auto c = std::make_shared<const StandardBoundary>(shared_c());
    const double m0 = 0.4;
    const double r0 = 0.5;
    const NormalPriorBoundary view(c, m0, r0);
    for (double r : {0.01, 0.2, 0.7}) {
        const auto sum = view.sum(r);
        // Posterior mean at the sum boundary equals the posterior-mean boundary.
        CHECK((m0 * r0 + sum.upper) / (r0 + r) == doctest::Approx(view.posterior_mean(r)).epsilon(1e-12));
        CHECK(view.pvalue(r) == doctest::Approx(numerics::std_normal_sf(sum.upper / std::sqrt(r))).epsilon(1e-12));
        // Mirror curve shifted by the prior mean.
        CHECK(sum.upper + sum.lower == doctest::Approx(-2.0 * m0 * r0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(view.posterior_mean(1.5), Error);
    CHECK_THROWS_AS(c_to_posterior_mean_boundary(*c, 0.0, 0.5), Error);
}

TEST_CASE("sum boundary view as a stopping boundary") {
    const auto c = std::make_shared<const StandardBoundary>(shared_c());
    const auto grid = make_time_grid(small_config(300));
    const Boundary sym = NormalPriorBoundary(c, 0.0, 1.0).to_boundary(grid);
    CHECK(sym.lower_kind == LowerKind::Mirror);
    CHECK_NOTHROW(sym.validate());
    const Boundary shifted = NormalPriorBoundary(c, 0.3, 1.0).to_boundary(grid);
    CHECK(shifted.lower_kind == LowerKind::Explicit);
    CHECK_NOTHROW(shifted.validate());
}

TEST_CASE("p-value boundary increases in r for r0 in {0, 0.1, 1}") {
    const auto& c = shared_c();
    for (double r0 : {0.0, 0.1, 1.0}) {
        double prev = -1.0;
        for (double r = 1e-4; r <= 1.0; r *= 1.25) {
            const double p = c_to_pvalue_boundary(c, 0.0, r0, r);
            CHECK(p >= prev);
            prev = p;
        }
        CHECK(c_to_pvalue_boundary(c, 0.0, r0, 1.0) == doctest::Approx(0.5));
    }
}

TEST_CASE("small-r p-value boundary is close to r for the improper prior") {
    const auto& c = shared_c();
    for (double r : {1e-4, 1e-3, 1e-2}) {
        CHECK(std::fabs(c_to_pvalue_boundary(c, 0.0, 0.0, r) / r - 1.0) <= 0.15);
        CHECK(pvalue_approx(r, 0.0, 0.0, 0.0) == doctest::Approx(r).epsilon(1e-9));
    }
}

TEST_CASE("asymptotic form of c_q") {
    CHECK(asymptotic_cq(-100.0, 0.0) ==
          doctest::Approx(10.0 * numerics::std_normal_quantile(1.0 - 1.0 / 100.0)).epsilon(1e-14));
    CHECK(asymptotic_cq(-100.0, 1.0) ==
          doctest::Approx(10.0 * numerics::std_normal_quantile(1.0 - 1.5 / 100.0)).epsilon(1e-14));
    CHECK(asymptotic_cq(-100.0, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(10.0 * numerics::std_normal_quantile(1.0 - 2.0 / 100.0)).epsilon(1e-14));
}

TEST_CASE("classical comparison at alpha = 0.025") {
    const auto at_small = classical_rule_compare(0.025, 1e-5, 0.0, 0.0, 0.0);
    CHECK(std::fabs(at_small.classical - 0.000625) <= 1e-15 * 0.000625 + 1e-19);
    CHECK(at_small.ordering == ClassicalOrdering::ClassicalAcceptsMore);
    CHECK(to_string(at_small.ordering) == "classical_accepts_more");
    const auto at_large = classical_rule_compare(0.025, 1e-3, 0.0, 0.0, 0.0);
    CHECK(at_large.ordering == ClassicalOrdering::OptimalAcceptsMore);
    const auto solved = classical_rule_compare(0.025, 1e-3, 0.0, 0.0, 0.0, &shared_c());
    CHECK(solved.ordering == ClassicalOrdering::OptimalAcceptsMore);
    CHECK(solved.optimal == doctest::Approx(c_to_pvalue_boundary(shared_c(), 0.0, 0.0, 1e-3)));
}

}
