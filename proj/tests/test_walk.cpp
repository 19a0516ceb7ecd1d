#include <doctest.h>

#include <numbers>

#include "cwalk/walk.hpp"
#include "support.hpp"

using namespace cwalk;
using cwalk::testing::max_abs_diff;
using cwalk::testing::random_field;

namespace {

bool is_unitary(const Matrix2& m, Real tol) { return (m.adjoint() * m - identity2()).cwiseAbs().maxCoeff() <= tol; }

}  // namespace

TEST_CASE("coin_matrix") {
    CHECK(coin_matrix({0.0, 3.3}) == identity2());
    CHECK(coin_matrix({0.4, 0.0}) == identity2());

    const Matrix2 q = coin_matrix({1.0, std::numbers::pi / 2});
    const Matrix2 expected = Complex(0, 1) * sigma_x();
    CHECK((q - expected).cwiseAbs().maxCoeff() <= 1e-16);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<Real> eps(0, 1), theta(-50, 50);
    for (int i = 0; i < 200; ++i) CHECK(is_unitary(coin_matrix({eps(rng), theta(rng)}), 1e-14));
}

TEST_CASE("shift_apply moves up left and down right") {
    const Grid g = Grid::make(10, 0.1);
    SpinorField up(g), down(g);
    up.up[5] = 1;
    down.down[5] = 1;

    const SpinorField su = shift_apply(up);
    CHECK(su.up[4] == Complex(1));
    CHECK(prob_norm(su) == 1.0);

    const SpinorField sd = shift_apply(down);
    CHECK(sd.down[6] == Complex(1));
    CHECK(prob_norm(sd) == 1.0);

    SpinorField edge(g);
    edge.up[0] = 1;
    edge.down[9] = 1;
    const SpinorField wrapped = shift_apply(edge);
    CHECK(wrapped.up[9] == Complex(1));
    CHECK(wrapped.down[0] == Complex(1));

    std::mt19937_64 rng(2);
    const SpinorField f = random_field(g, rng);
    CHECK(prob_norm(shift_apply(f)) == doctest::Approx(prob_norm(f)).epsilon(1e-15));
    CHECK(max_abs_diff(shift_inverse_apply(shift_apply(f)), f) == 0.0);
}

TEST_CASE("flat_step") {
    const Grid g = Grid::make(64, 1.0 / 64);
    std::mt19937_64 rng(3);

    SUBCASE("theta = 0 is a pure shift") {
        const SpinorField f = random_field(g, rng);
        CHECK(max_abs_diff(flat_step(f, {g.dx, 0.0}), shift_apply(f)) == 0.0);
    }
    SUBCASE("unitary over 1000 composed steps") {
        std::uniform_real_distribution<Real> theta(-20, 20), eps(0, 1);
        for (int trial = 0; trial < 5; ++trial) {
            const SpinorField f = random_field(g, rng);
            const SpinorField out = flat_evolve(f, {eps(rng), theta(rng)}, 1000);
            CHECK(std::abs(prob_norm(out) - prob_norm(f)) <= 1e-12);
        }
    }
    SUBCASE("massless steps translate a single up excitation by one site each") {
        // iterating up(x) <- up(x + dx) by hand: site k -> k - n (mod n_sites)
        for (int n : {1, 5, 63, 64, 130}) {
            SpinorField f(g);
            f.up[7] = 1;
            const SpinorField out = flat_evolve(f, {g.dx, 0.0}, n);
            const int target = ((7 - n) % 64 + 64) % 64;
            CHECK(out.up[target] == Complex(1));
            CHECK(prob_norm(out) == 1.0);
            CHECK(out.down.cwiseAbs().maxCoeff() == 0.0);
        }
    }
    SUBCASE("massless evolution is an exact permutation") {
        const SpinorField f = random_field(g, rng);
        const SpinorField out = flat_evolve(f, {g.dx, 0.0}, 9);
        for (int j = 0; j < g.n_sites; ++j) {
            CHECK(out.up[j] == f.up[g.wrap(j + 9)]);
            CHECK(out.down[j] == f.down[g.wrap(j - 9)]);
        }
    }
}

TEST_CASE("flat_step acts on plane waves as a k-dependent 2x2 unitary") {
    const Grid g = Grid::make(48, 0.125, -3);
    const CoinParams coin{g.dx, 2.3};
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> mode(-g.n_sites / 2, g.n_sites / 2 - 1);
    for (int trial = 0; trial < 8; ++trial) {
        const Real k = 2 * std::numbers::pi * mode(rng) / g.length();
        const Matrix2 spin = cwalk::testing::random_unitary(rng);
        const Complex s_up = spin(0, 0), s_dn = spin(1, 0);
        SpinorField wave(g);
        for (int j = 0; j < g.n_sites; ++j) {
            const Complex phase = std::polar(1.0, k * g.position(j));
            wave.up[j] = phase * s_up;
            wave.down[j] = phase * s_dn;
        }
        // independent per-mode multiplication: diag(e^{ik dx}, e^{-ik dx}) times the coin
        const Real c = std::cos(coin.eps * coin.theta), s = std::sin(coin.eps * coin.theta);
        const Complex mixed_up = c * s_up + Complex(0, s) * s_dn;
        const Complex mixed_dn = Complex(0, s) * s_up + c * s_dn;
        const Complex out_up = std::polar(1.0, k * g.dx) * mixed_up;
        const Complex out_dn = std::polar(1.0, -k * g.dx) * mixed_dn;

        const SpinorField stepped = flat_step(wave, coin);
        for (int j = 0; j < g.n_sites; ++j) {
            const Complex phase = std::polar(1.0, k * g.position(j));
            CHECK(std::abs(stepped.up[j] - phase * out_up) <= 1e-13);
            CHECK(std::abs(stepped.down[j] - phase * out_dn) <= 1e-13);
        }
    }
}

TEST_CASE("doubled_step") {
    const Grid g = Grid::make(32, 1.0 / 32);
    std::mt19937_64 rng(5);
    const CoinParams coin{g.dx, 4.0};

    SUBCASE("zero phi stays zero and psi follows flat_step") {
        const SpinorField psi = random_field(g, rng);
        const DoubledField out = doubled_step(DoubledField(psi, SpinorField(g)), coin);
        CHECK(max_abs_diff(out.psi, flat_step(psi, coin)) == 0.0);
        CHECK(prob_norm(out.phi) == 0.0);
    }
    SUBCASE("total norm preserved") {
        DoubledField state = cwalk::testing::random_doubled(g, rng);
        const Real before = total_norm(state);
        for (int n = 0; n < 500; ++n) state = doubled_step(state, coin, {g.dx, -1.0});
        CHECK(std::abs(total_norm(state) - before) <= 1e-14 * 500);
        CHECK(std::abs(total_norm(state) - before) <= 1e-12);
    }
    SUBCASE("identical coins keep identical sectors identical") {
        const SpinorField f = random_field(g, rng);
        DoubledField state(f, f);
        for (int n = 0; n < 40; ++n) {
            state = doubled_step(state, coin, coin);
            REQUIRE(max_abs_diff(state.psi, state.phi) == 0.0);
        }
    }
    SUBCASE("evolve_bulk matches repeated doubled steps") {
        const DoubledField start = cwalk::testing::random_doubled(g, rng);
        DoubledField manual = start;
        for (int n = 0; n < 17; ++n) manual = doubled_step(manual, coin, {g.dx, 1.0});
        CHECK(max_abs_diff(evolve_bulk(start, coin, {g.dx, 1.0}, 17), manual) == 0.0);
    }
}
