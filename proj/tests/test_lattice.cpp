#include <doctest.h>

#include "cwalk/lattice.hpp"
#include "support.hpp"

using namespace cwalk;
using cwalk::testing::random_field;

TEST_CASE("grid construction enforces lattice units and minimum size") {
    const Grid g = Grid::make(16, 0.25, -2);
    CHECK(g.dt == g.dx);
    CHECK(g.position(4) == doctest::Approx(-1.0));
    CHECK(g.wrap(-1) == 15);
    CHECK(g.wrap(16) == 0);
    CHECK_THROWS_AS(Grid::make(3, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(Grid::make(8, 0.0), std::invalid_argument);

    const Grid c = Grid::centered(8, 1.0 / 64);
    CHECK(c.n_sites == 512);
    CHECK(c.origin == -4.0);
    CHECK_THROWS_AS(Grid::centered(1.0, 0.3), std::invalid_argument);
}

TEST_CASE("pauli matrices square to the identity") {
    CHECK((sigma_x() * sigma_x() - identity2()).norm() == 0.0);
    CHECK((sigma_z() * sigma_z() - identity2()).norm() == 0.0);
}

TEST_CASE("gaussian_packet") {
    const Grid g = Grid::centered(8, 1.0 / 32);

    SUBCASE("chi = 0 leaves the down component identically zero") {
        const SpinorField f = gaussian_packet(g, {0.5, 0.4, 3.0, 0.0, 1.0});
        CHECK(f.down.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("normalized for assorted valid inputs") {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<Real> x0(-3.9, 3.9), sigma(0.07, 1.5), k0(-10, 10), ang(0, 6.28);
        for (int i = 0; i < 50; ++i) {
            const SpinorField f = gaussian_packet(g, {x0(rng), sigma(rng), k0(rng), ang(rng), ang(rng)});
            CHECK(std::abs(prob_norm(f) - 1) <= 1e-12);
        }
    }
    SUBCASE("k0 = 0 centered packet is even about its center") {
        const SpinorField f = gaussian_packet(g, {0.0, 0.5, 0.0, 0.3, 0.0});
        const int center = g.n_sites / 2;
        REQUIRE(g.position(center) == 0.0);
        for (int d = 1; d < center; ++d) {
            CHECK(std::abs(f.up[center + d]) == doctest::Approx(std::abs(f.up[center - d])).epsilon(1e-14));
            CHECK(std::abs(f.down[center + d]) == doctest::Approx(std::abs(f.down[center - d])).epsilon(1e-14));
        }
    }
    SUBCASE("rejects under-resolved packets and centers outside the grid") {
        CHECK_THROWS_AS(gaussian_packet(g, {0.0, 1.9 * g.dx, 0, 0, 0}), PreconditionError);
        CHECK_NOTHROW(gaussian_packet(g, {0.0, 2 * g.dx, 0, 0, 0}));
        CHECK_THROWS_AS(gaussian_packet(g, {4.0, 0.5, 0, 0, 0}), PreconditionError);
        CHECK_THROWS_AS(gaussian_packet(g, {-4.1, 0.5, 0, 0, 0}), PreconditionError);
    }
}

TEST_CASE("prob_norm") {
    const Grid g = Grid::make(8, 0.5);
    SpinorField f(g);
    CHECK(prob_norm(f) == 0.0);
    f.up[3] = std::polar(1.0, 0.7);
    CHECK(prob_norm(f) == doctest::Approx(1.0).epsilon(1e-15));

    std::mt19937_64 rng(2);
    SpinorField r = random_field(g, rng);
    const Real before = prob_norm(r);
    const Complex z(0.3, -1.7);
    r *= z;
    CHECK(prob_norm(r) == doctest::Approx(std::norm(z) * before).epsilon(1e-14));
}

TEST_CASE("l2_distance is a metric and matches the site sum") {
    const Grid g = Grid::make(64, 1.0 / 16);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const SpinorField a = random_field(g, rng), b = random_field(g, rng), c = random_field(g, rng);
        CHECK(l2_distance(a, a) == 0.0);
        CHECK(l2_distance(a, b) == l2_distance(b, a));
        CHECK(l2_distance(a, c) <= l2_distance(a, b) + l2_distance(b, c) + 1e-15);
        CHECK(l2_distance(a, b) == doctest::Approx(cwalk::testing::brute_l2(a, b)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(l2_distance(SpinorField(g), SpinorField(Grid::make(64, 1.0 / 8))), std::invalid_argument);
}

TEST_CASE("fidelity") {
    const Grid g = Grid::make(32, 0.1);
    std::mt19937_64 rng(4);
    const SpinorField a = random_field(g, rng);
    CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-14));

    SpinorField rotated = a;
    rotated *= std::polar(1.0, 2.1);
    CHECK(fidelity(a, rotated) == doctest::Approx(1.0).epsilon(1e-14));

    SpinorField left(g), right(g);
    left.up[2] = 1;
    left.down[3] = 0.5;
    right.up[10] = 1;
    right.down[11] = Complex(0, 1);
    CHECK(fidelity(left, right) == 0.0);

    CHECK_THROWS_AS(fidelity(a, SpinorField(g)), std::invalid_argument);
}

TEST_CASE("site-local unitaries leave the probability density unchanged") {
    const Grid g = Grid::make(128, 1.0 / 32);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const SpinorField f = random_field(g, rng);
        std::vector<Matrix2> unitaries(g.n_sites);
        for (auto& u : unitaries) u = cwalk::testing::random_unitary(rng);
        const SpinorField out = apply_site_matrices(f, unitaries);
        CHECK((out.density() - f.density()).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK(std::abs(prob_norm(out) - prob_norm(f)) <= 1e-14);
    }
}

TEST_CASE("operations are deterministic") {
    const Grid g = Grid::centered(4, 1.0 / 64);
    const SpinorField a = gaussian_packet(g, {0.2, 0.3, 1.5, 0.4, 0.1});
    const SpinorField b = gaussian_packet(g, {0.2, 0.3, 1.5, 0.4, 0.1});
    CHECK(a.up == b.up);
    CHECK(a.down == b.down);
    CHECK(prob_norm(a) == prob_norm(b));
}

TEST_CASE("DoubledField requires a shared grid") {
    CHECK_THROWS_AS(DoubledField(SpinorField(Grid::make(8, 0.1)), SpinorField(Grid::make(9, 0.1))),
                    std::invalid_argument);
}
