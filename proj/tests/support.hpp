#pragma once

// Test-only generators and oracles. Nothing here calls into the code under test
// beyond the plain data types.

#include <cmath>
#include <random>
#include <vector>

#include "cwalk/lattice.hpp"

namespace cwalk::testing {

inline SpinorField random_field(const Grid& grid, std::mt19937_64& rng) {
    std::normal_distribution<Real> gauss;
    SpinorField f(grid);
    for (int j = 0; j < grid.n_sites; ++j) {
        f.up[j] = Complex(gauss(rng), gauss(rng));
        f.down[j] = Complex(gauss(rng), gauss(rng));
    }
    Real norm = 0;
    for (int j = 0; j < grid.n_sites; ++j) norm += std::norm(f.up[j]) + std::norm(f.down[j]);
    f.up /= std::sqrt(norm);
    f.down /= std::sqrt(norm);
    return f;
}

inline DoubledField random_doubled(const Grid& grid, std::mt19937_64& rng) {
    SpinorField psi = random_field(grid, rng);
    SpinorField phi = random_field(grid, rng);
    return DoubledField(psi, phi);
}

/// Haar-ish random 2x2 unitary via QR of a complex Gaussian matrix.
inline Matrix2 random_unitary(std::mt19937_64& rng) {
    std::normal_distribution<Real> gauss;
    Matrix2 m;
    for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = Complex(gauss(rng), gauss(rng));
    return Eigen::HouseholderQR<Matrix2>(m).householderQ();
}

inline RealVector random_weights(int n, Real lo, Real hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<Real> u(lo, hi);
    RealVector w(n);
    for (int j = 0; j < n; ++j) w[j] = u(rng);
    return w;
}

/// Brute-force sum_x dx |a - b|^2 square root, written out site by site.
inline Real brute_l2(const SpinorField& a, const SpinorField& b) {
    Real sum = 0;
    for (int j = 0; j < a.size(); ++j) sum += std::norm(a.up[j] - b.up[j]) + std::norm(a.down[j] - b.down[j]);
    return std::sqrt(a.grid.dx * sum);
}

inline Real max_abs_diff(const SpinorField& a, const SpinorField& b) {
    return std::max((a.up - b.up).cwiseAbs().maxCoeff(), (a.down - b.down).cwiseAbs().maxCoeff());
}

inline Real max_abs_diff(const DoubledField& a, const DoubledField& b) {
    return std::max(max_abs_diff(a.psi, b.psi), max_abs_diff(a.phi, b.phi));
}

}  // namespace cwalk::testing
