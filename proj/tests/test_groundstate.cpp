#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "torsion/analytic.hpp"
#include "torsion/groundstate.hpp"

using namespace torsion;

TEST_CASE("free potential: the lower bound is zero") {
    const Grid g = build_grid(1, 16.0, 0.005, 8.0);
    const LandscapeField u =
        solve_landscape(assemble(sample_potential(PotentialSpec::zero(), g), 2.0));
    CHECK(groundstate_lower_bound(u) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("square well lower bound sits under the spectral ground state") {
    const Grid g = build_grid(1, 20.0, 0.001, 15.0);
    const PotentialField v = sample_potential(PotentialSpec::square_well(1.0, 1.0), g);
    const double e0 = spectrum_below(assemble(v, 0.0), 0.0, 1e-12)[0];
    for (double m : {0.6, 1.0, 2.0, 5.0, 10.0}) {
        const LandscapeField u = solve_landscape(assemble(v, m));
        const double lb = groundstate_lower_bound(u);
        CHECK(lb <= e0);
        // and it matches the closed form
        CHECK(lb == doctest::Approx(squarewell_inf_effective(1.0, 1.0, m)).epsilon(1e-5));
    }
}

TEST_CASE("iteration on the free potential strips the whole shift at once") {
    const Grid g = build_grid(1, 16.0, 0.005, 8.0);
    const IterationTrace t = iterate_M(PotentialSpec::zero(), g, 5.0, 1e-10, 200);
    CHECK(t.converged);
    REQUIRE(t.steps.size() >= 1);
    // F(M) = M - M: the first step removes essentially all of M_0
    CHECK(t.steps[0].inf_inv_u == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(std::abs(t.steps[0].shift - t.steps[0].inf_inv_u) < 1e-6);
    // the limit is -E0 of the truncated operator, which is the Dirichlet
    // ground energy of order (pi/2L)^2 rather than the whole-line value 0
    const double e0_h =
        spectrum_below(assemble(sample_potential(PotentialSpec::zero(), g), 0.0), 0.1, 1e-12)[0];
    CHECK(t.groundstate_estimate == doctest::Approx(e0_h).epsilon(1e-4));
    CHECK(std::abs(t.groundstate_estimate) < 0.01);
}

TEST_CASE("a window that misses the potential stops at the admissibility boundary") {
    // well centered at x = 10, window [-6, 6]: the landscape peak sits outside
    // the window, the first step overshoots past -E0 and the run flags it
    const Grid g = build_grid(1, 16.0, 0.005, 6.0);
    std::vector<double> v(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(g.node(i) - 10.0) <= 1.0) v[i] = -10.0;
    const IterationTrace t = iterate_M(PotentialSpec::tabulated(v), g, 12.0, 1e-10, 50);
    CHECK_FALSE(t.converged);
    CHECK(t.stop_reason.find("admissibility boundary") != std::string::npos);
}

TEST_CASE("iteration converges to -E0 for the square well") {
    const Grid g = build_grid(1, 20.0, 0.001, 15.0);
    const IterationTrace t = iterate_M(PotentialSpec::square_well(1.0, 1.0), g, 10.0, 1e-9, 500);
    CHECK(t.converged);
    CHECK(t.final_shift == doctest::Approx(-squarewell_E0(1.0, 1.0)).epsilon(1e-5));
    for (std::size_t i = 1; i < t.steps.size(); ++i) {
        CHECK(t.steps[i].shift < t.steps[i - 1].shift);
        CHECK(t.steps[i].max_u > t.steps[i - 1].max_u);
    }
    CHECK(t.steps.back().max_u > 1e3);
}

TEST_CASE("iteration rejects an indefinite start") {
    const Grid g = build_grid(1, 20.0, 0.001, 15.0);
    CHECK_THROWS_AS(iterate_M(PotentialSpec::square_well(1.0, 1.0), g, 0.3, 1e-9, 50),
                    IndefiniteOperatorError);
    CHECK_THROWS_AS(iterate_M(PotentialSpec::zero(), g, 1.0, -1.0, 50), std::invalid_argument);
}

TEST_CASE("every step obeys the sandwich") {
    const Grid g = build_grid(1, 20.0, 0.001, 15.0);
    const PotentialField v = sample_potential(PotentialSpec::square_well(1.0, 1.0), g);
    const double e0 = spectrum_below(assemble(v, 0.0), 0.0, 1e-12)[0];
    const IterationTrace t = iterate_M(PotentialSpec::square_well(1.0, 1.0), g, 10.0, 1e-6, 100);
    for (const IterationStep& s : t.steps) CHECK(s.inf_inv_u - s.shift <= e0 + 1e-12);
}

TEST_CASE("first iterate is already order-eps accurate for shallow wells") {
    // for eps = 0.01 and M = 2 eps the one-step estimate lands within
    // 2 eps^(3/2) of E0; checked against the closed form and the grid
    const double eps = 0.01;
    const double e0 = squarewell_E0(eps, 1.0);
    const double analytic_gap = std::abs(squarewell_inf_effective(eps, 1.0, 2.0 * eps) - e0);
    CHECK(analytic_gap <= 2.0 * std::pow(eps, 1.5));

    const Grid g = build_grid(1, 80.0, 0.01, 60.0);
    const LandscapeField u =
        solve_landscape(assemble(sample_potential(PotentialSpec::square_well(eps, 1.0), g), 2.0 * eps));
    const double numeric_gap = std::abs(groundstate_lower_bound(u) - e0);
    CHECK(numeric_gap <= 2.0 * std::pow(eps, 1.5));
    CHECK(numeric_gap == doctest::Approx(analytic_gap).epsilon(1e-2));

    // the eps = 1e-3 point rides on the closed form alone
    const double eps2 = 1e-3;
    const double gap2 = std::abs(squarewell_inf_effective(eps2, 1.0, 2.0 * eps2) -
                                 squarewell_E0(eps2, 1.0));
    CHECK(gap2 <= 2.0 * std::pow(eps2, 1.5));
}
