#pragma once

#include "cwalk/lattice.hpp"

namespace cwalk {

/// Coin parameters: expansion parameter eps and mass theta (lattice units).
struct CoinParams {
    Real eps = 0;
    Real theta = 0;
};

/// [[cos(eps theta), i sin(eps theta)], [i sin(eps theta), cos(eps theta)]]
Matrix2 coin_matrix(const CoinParams& params);

/// Same 2x2 matrix at every site.
SpinorField apply_uniform(const SpinorField& field, const Matrix2& m);

/// up(x) <- up(x + dx), down(x) <- down(x - dx), periodic.
SpinorField shift_apply(const SpinorField& field);
/// Inverse of shift_apply.
SpinorField shift_inverse_apply(const SpinorField& field);

/// S Q field (coin first, then shift).
SpinorField flat_step(const SpinorField& field, const CoinParams& params);
SpinorField flat_evolve(SpinorField field, const CoinParams& params, int steps);

/// Block-diagonal step of the doubled walk.
DoubledField doubled_step(const DoubledField& state, const CoinParams& coin_psi, const CoinParams& coin_phi);
inline DoubledField doubled_step(const DoubledField& state, const CoinParams& coin) {
    return doubled_step(state, coin, coin);
}

/// Homogeneous bulk evolution: `steps` doubled steps. Takes no metric input.
DoubledField evolve_bulk(DoubledField state, const CoinParams& coin_psi, const CoinParams& coin_phi, int steps);

}  // namespace cwalk
