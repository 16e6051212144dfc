#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracle_dense.hpp"
#include "torsion/analytic.hpp"
#include "torsion/grid.hpp"
#include "torsion/potentials.hpp"
#include "torsion/spectral.hpp"

using namespace torsion;

namespace {

Grid three_node_grid() { return build_grid(1, 2.0, 1.0, 2.0); }

DiscreteOperator laplacian_3() {
    static Grid g = three_node_grid();
    return assemble(sample_potential(PotentialSpec::zero(), g), 0.0);
}

} // namespace

TEST_CASE("assemble stencil entries") {
    Grid g = three_node_grid();
    const DiscreteOperator op = assemble(sample_potential(PotentialSpec::zero(), g), 1.0);
    REQUIRE(op.size() == 3);
    for (double a : op.diagonal) CHECK(a == doctest::Approx(3.0));
    CHECK(op.off_diagonal == doctest::Approx(-1.0));

    const DiscreteOperator op_well =
        assemble(sample_potential(PotentialSpec::square_well(1.0, 1.0), g), 0.0);
    CHECK(op_well.diagonal[1] == doctest::Approx(2.0 - 1.0)); // node at x = 0
}

TEST_CASE("count_below on the closed-form tridiagonal spectrum") {
    // 3-node Dirichlet Laplacian, h = 1: eigenvalues 2 - sqrt(2), 2, 2 + sqrt(2)
    const DiscreteOperator op = laplacian_3();
    CHECK(count_below(op, 2.0) == 2);  // <= convention, exercised through the zero-pivot nudge
    CHECK(count_below(op, 0.5) == 0);
    CHECK(count_below(op, 1.0) == 1);
    CHECK(count_below(op, 10.0) == 3);
}

TEST_CASE("positive operator counts nothing below a positive floor") {
    Grid g = build_grid(1, 12.0, 0.01, 10.0);
    const DiscreteOperator op = assemble(sample_potential(PotentialSpec::zero(), g), 1.0);
    CHECK(count_below(op, 0.5) == 0);
}

TEST_CASE("shallow well binds exactly one state") {
    Grid g = build_grid(1, 20.0, 0.001, 15.0);
    const DiscreteOperator op =
        assemble(sample_potential(PotentialSpec::square_well(1.0, 1.0), g), 0.0);
    CHECK(count_below(op, -1e-9) == 1);
}

TEST_CASE("spectrum_below localizes the closed-form spectrum") {
    const DiscreteOperator op = laplacian_3();
    const auto eigs = spectrum_below(op, 10.0, 1e-12);
    REQUIRE(eigs.size() == 3);
    CHECK(eigs[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-10));
    CHECK(eigs[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(eigs[2] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-10));
    CHECK_THROWS_AS(spectrum_below(op, 10.0, -1.0), std::invalid_argument);
}

TEST_CASE("spectrum_below: empty and bound-state cases") {
    Grid g = build_grid(1, 12.0, 0.01, 10.0);
    const DiscreteOperator positive = assemble(sample_potential(PotentialSpec::zero(), g), 1.0);
    CHECK(spectrum_below(positive, 0.9, 1e-8).empty());

    Grid fine = build_grid(1, 20.0, 0.001, 15.0);
    const DiscreteOperator well =
        assemble(sample_potential(PotentialSpec::square_well(1.0, 1.0), fine), 0.0);
    const auto eigs = spectrum_below(well, 0.0, 1e-10);
    REQUIRE(eigs.size() == 1);
    CHECK(eigs[0] == doctest::Approx(squarewell_E0(1.0, 1.0)).epsilon(1e-5));
}

TEST_CASE("inertia count agrees with the dense Jacobi oracle") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> pot(-3.0, 3.0);
    for (int rep = 0; rep < 4; ++rep) {
        const std::size_t n = 40 + 40 * rep; // up to 160 nodes
        Grid g = build_grid(1, 2.0, 4.0 / static_cast<double>(n + 1), 2.0);
        REQUIRE(g.size() == n);
        std::vector<double> v(n);
        for (double& x : v) x = pot(rng);
        const DiscreteOperator op = assemble(sample_potential(PotentialSpec::tabulated(v), g), 0.0);
        const auto dense = oracle::tridiagonal_eigenvalues(op.diagonal, op.off_diagonal);
        const auto [lo, hi] = gershgorin_bounds(op);
        for (int i = 0; i <= 100; ++i) {
            const double mu = lo + (hi - lo) * i / 100.0;
            const long expected = static_cast<long>(
                std::upper_bound(dense.begin(), dense.end(), mu + 1e-9) - dense.begin());
            CHECK(count_below(op, mu) == expected);
        }
    }
}

TEST_CASE("counting function is monotone and shift covariant") {
    Grid g = build_grid(1, 6.0, 0.05, 5.0);
    const DiscreteOperator op =
        assemble(sample_potential(PotentialSpec::square_well(2.0, 1.5), g), 0.0);
    long prev = -1;
    for (double mu = -2.5; mu <= 3.0; mu += 0.11) {
        const long c = count_below(op, mu);
        CHECK(c >= prev);
        prev = c;
        // count_below(H + s, mu + s) == count_below(H, mu): identical pivots
        DiscreteOperator shifted = op;
        const double s = 0.7351;
        for (double& a : shifted.diagonal) a += s;
        CHECK(count_below(shifted, mu + s) == c);
    }
}

TEST_CASE("pointwise larger potentials bind fewer states") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> pot(-4.0, 0.0);
    std::uniform_real_distribution<double> bump(0.0, 1.5);
    Grid g = build_grid(1, 4.0, 0.1, 3.0);
    std::vector<double> v1(g.size()), v2(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        v1[i] = pot(rng);
        v2[i] = v1[i] + bump(rng);
    }
    const DiscreteOperator op1 = assemble(sample_potential(PotentialSpec::tabulated(v1), g), 0.0);
    const DiscreteOperator op2 = assemble(sample_potential(PotentialSpec::tabulated(v2), g), 0.0);
    for (double mu = -4.0; mu <= 4.0; mu += 0.37)
        CHECK(count_below(op1, mu) >= count_below(op2, mu));
}

TEST_CASE("negative moments: two-step layer cake") {
    const std::vector<double> eigs = {-4.0, -1.0};
    CHECK(negative_moment(eigs, 1.0, MomentMode::eigenvalue_sum) == doctest::Approx(5.0));
    CHECK(negative_moment(eigs, 1.0, MomentMode::layer_cake_integral) == doctest::Approx(5.0));
    CHECK(negative_moment(eigs, 2.0, MomentMode::eigenvalue_sum) == doctest::Approx(17.0));
    CHECK(negative_moment(eigs, 2.0, MomentMode::layer_cake_integral) == doctest::Approx(17.0));
    CHECK_THROWS_AS(negative_moment(eigs, 0.0, MomentMode::eigenvalue_sum), std::invalid_argument);
}

TEST_CASE("negative moments agree across modes on random spectra") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> mag(1e-6, 10.0);
    std::uniform_int_distribution<int> size(1, 60);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> eigs(size(rng));
        for (double& e : eigs) e = -mag(rng);
        for (double gamma : {0.5, 1.0, 1.5, 2.0, 3.0}) {
            const double a = negative_moment(eigs, gamma, MomentMode::eigenvalue_sum);
            const double b = negative_moment(eigs, gamma, MomentMode::layer_cake_integral);
            CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, a));
        }
    }
}

TEST_CASE("layer cake on a counting curve") {
    // spectrum {-4, -1}: curve sampled below, between and above
    CountingCurve curve;
    curve.provenance = CurveProvenance::analytic;
    curve.mu = {-5.0, -4.0, -2.5, -1.0, -0.5};
    curve.count = {0, 1, 1, 2, 2};
    CHECK(negative_moment(curve, 1.0) == doctest::Approx(5.0));
    CHECK(negative_moment(curve, 2.0) == doctest::Approx(17.0));

    CountingCurve bad = curve;
    bad.provenance = CurveProvenance::box_N;
    CHECK_THROWS_AS(negative_moment(bad, 1.0), std::invalid_argument);
}

TEST_CASE("counting curve from the operator is nondecreasing") {
    Grid g = build_grid(1, 6.0, 0.05, 5.0);
    const DiscreteOperator op =
        assemble(sample_potential(PotentialSpec::square_well(2.0, 1.5), g), 0.0);
    std::vector<double> mu;
    for (double m = -2.0; m <= 1.0; m += 0.1) mu.push_back(m);
    const CountingCurve c = counting_curve(op, mu);
    for (std::size_t i = 1; i < c.count.size(); ++i) CHECK(c.count[i] >= c.count[i - 1]);
}
