#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "torsion/analytic.hpp"

using namespace torsion;

TEST_CASE("squarewell_E0 solves the transcendental equation") {
    for (auto [eps, delta] : {std::pair{1.0, 1.0}, {0.01, 1.0}, {100.0, 1.0}, {2.5, 0.4}}) {
        const double e0 = squarewell_E0(eps, delta);
        const double x = e0 + eps; // smallest positive root
        REQUIRE(x > 0.0);
        CHECK(std::sqrt(eps - x) ==
              doctest::Approx(std::sqrt(x) * std::tan(std::sqrt(x) * delta)).epsilon(1e-9));
    }
}

TEST_CASE("shallow well: E0 = -delta^2 eps^2 + O(eps^3)") {
    const double e0 = squarewell_E0(0.01, 1.0);
    CHECK(e0 == doctest::Approx(-1e-4).epsilon(0.05));
}

TEST_CASE("unit well ground state hits the Dottie point") {
    // for eps = delta = 1 the bound-state momentum solves cos k = k exactly,
    // so E0 = k^2 - 1 with k the fixed point of cos
    double k = 0.7;
    for (int i = 0; i < 200; ++i) k = std::cos(k);
    CHECK(squarewell_E0(1.0, 1.0) == doctest::Approx(k * k - 1.0).epsilon(1e-10));
}

TEST_CASE("deep well level sits below the Dirichlet value") {
    // E0 + eps is the lowest well level; for depth 100 it must undercut
    // the hard-wall value pi^2/4 and solve the root equation (checked above)
    const double level = squarewell_E0(100.0, 1.0) + 100.0;
    CHECK(level < M_PI * M_PI / 4.0);
    CHECK(level > 1.5);
}

TEST_CASE("closed-form landscape, M > eps") {
    const SquareWellClosedForm f = squarewell_landscape(1.0, 1.0, 2.0);
    CHECK(f.regime == +1);
    CHECK(f(0.0) == doctest::Approx(0.7894).epsilon(1e-3));
    CHECK(f(50.0) == doctest::Approx(0.5).epsilon(1e-9)); // far field 1/M
}

TEST_CASE("closed-form landscape is C^1 at the well edge in every regime") {
    const double delta = 1.0, eps = 1.0;
    for (double M : {2.0, 1.0, 0.6}) { // M > eps, M = eps, M < eps
        const SquareWellClosedForm f = squarewell_landscape(eps, delta, M);
        const double sM = std::sqrt(M);
        double val_in = 0.0, slope_in = 0.0;
        switch (f.regime) {
        case +1: {
            const double k = std::sqrt(M - eps);
            val_in = 1.0 / (M - eps) + f.inside_coeff * std::cosh(k * delta);
            slope_in = f.inside_coeff * k * std::sinh(k * delta);
            break;
        }
        case 0:
            val_in = f.inside_coeff - 0.5 * delta * delta;
            slope_in = -delta;
            break;
        default: {
            const double k = std::sqrt(eps - M);
            val_in = 1.0 / (M - eps) + f.inside_coeff * std::cos(k * delta);
            slope_in = -f.inside_coeff * k * std::sin(k * delta);
            break;
        }
        }
        const double val_out = 1.0 / M + f.outside_coeff * std::exp(-sM * delta);
        const double slope_out = -sM * f.outside_coeff * std::exp(-sM * delta);
        CHECK(std::abs(val_in - val_out) < 1e-12 * std::abs(val_in));
        CHECK(std::abs(slope_in - slope_out) < 1e-12 * std::max(1.0, std::abs(slope_in)));
    }
}

TEST_CASE("landscape blows up as M approaches -E0") {
    const double e0 = squarewell_E0(1.0, 1.0);
    double prev = 0.0;
    for (double gap : {0.1, 0.01, 0.001, 1e-5}) {
        const double u0 = squarewell_landscape(1.0, 1.0, -e0 + gap)(0.0);
        CHECK(u0 > prev);
        prev = u0;
    }
    CHECK(prev > 1e3);
    CHECK_THROWS_AS(squarewell_landscape(1.0, 1.0, -e0 - 1e-6), std::domain_error);
}

TEST_CASE("infimum of the effective potential") {
    SUBCASE("M = eps closed form") {
        CHECK(squarewell_inf_effective(0.01, 1.0, 0.01) == doctest::Approx(-9.502e-4).epsilon(1e-3));
    }
    SUBCASE("M > eps") {
        CHECK(squarewell_inf_effective(1.0, 1.0, 2.0) == doctest::Approx(-0.7332).epsilon(1e-3));
    }
    SUBCASE("shallow well, M = 2 eps: order-eps accuracy") {
        const double eps = 0.01;
        const double inf_eff = squarewell_inf_effective(eps, 1.0, 2.0 * eps);
        const double e0 = squarewell_E0(eps, 1.0);
        CHECK(inf_eff <= e0);
        CHECK(std::abs(inf_eff - e0) <= 2.0 * std::pow(eps, 1.5));
    }
}

TEST_CASE("ground-state bound holds analytically across shifts") {
    for (double eps : {0.05, 0.5, 1.0, 3.0}) {
        for (double delta : {0.5, 1.0, 2.0}) {
            const double e0 = squarewell_E0(eps, delta);
            for (double factor : {1.02, 1.3, 2.0, 10.0}) {
                const double M = -e0 * factor;
                CHECK(squarewell_inf_effective(eps, delta, M) <= e0 + 1e-12);
            }
        }
    }
}

TEST_CASE("hydrogen oracle") {
    CHECK(hydrogen_level(1) == doctest::Approx(-0.25));
    CHECK(hydrogen_count(-0.3) == 0);
    CHECK(hydrogen_count(-0.25) == 1);
    CHECK(hydrogen_count(-0.02) == 14);
    CHECK_THROWS_AS(hydrogen_count(0.1), std::invalid_argument);
}

TEST_CASE("hydrogen count approaches the Weyl form") {
    // count(mu) * 24 |mu|^(3/2) -> 1 along midpoints between levels
    for (int n : {50, 80, 120}) {
        const double mid = 0.5 * (hydrogen_level(n) + hydrogen_level(n + 1));
        const double ratio = static_cast<double>(hydrogen_count(mid)) * 24.0 *
                             std::pow(-mid, 1.5);
        CHECK(ratio == doctest::Approx(1.0).epsilon(0.05));
    }
}
