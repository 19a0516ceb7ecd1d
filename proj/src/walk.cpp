#include "cwalk/walk.hpp"

#include <cmath>

namespace cwalk {

Matrix2 coin_matrix(const CoinParams& params) {
    const Real angle = params.eps * params.theta;
    const Complex c = std::cos(angle);
    const Complex s(0, std::sin(angle));
    Matrix2 q;
    q << c, s, s, c;
    return q;
}

SpinorField apply_uniform(const SpinorField& field, const Matrix2& m) {
    SpinorField out(field.grid);
    out.up = m(0, 0) * field.up + m(0, 1) * field.down;
    out.down = m(1, 0) * field.up + m(1, 1) * field.down;
    return out;
}

namespace {

// out[j] = in[j + offset mod n]
void rotate_into(const ComplexVector& in, ComplexVector& out, int offset) {
    const Eigen::Index n = in.size();
    const Eigen::Index k = ((offset % n) + n) % n;
    out.head(n - k) = in.tail(n - k);
    out.tail(k) = in.head(k);
}

}  // namespace

SpinorField shift_apply(const SpinorField& field) {
    SpinorField out(field.grid);
    rotate_into(field.up, out.up, +1);
    rotate_into(field.down, out.down, -1);
    return out;
}

SpinorField shift_inverse_apply(const SpinorField& field) {
    SpinorField out(field.grid);
    rotate_into(field.up, out.up, -1);
    rotate_into(field.down, out.down, +1);
    return out;
}

SpinorField flat_step(const SpinorField& field, const CoinParams& params) {
    if (params.theta == 0) return shift_apply(field);
    return shift_apply(apply_uniform(field, coin_matrix(params)));
}

SpinorField flat_evolve(SpinorField field, const CoinParams& params, int steps) {
    for (int n = 0; n < steps; ++n) field = flat_step(field, params);
    return field;
}

DoubledField doubled_step(const DoubledField& state, const CoinParams& coin_psi, const CoinParams& coin_phi) {
    return DoubledField(flat_step(state.psi, coin_psi), flat_step(state.phi, coin_phi));
}

DoubledField evolve_bulk(DoubledField state, const CoinParams& coin_psi, const CoinParams& coin_phi, int steps) {
    state.psi = flat_evolve(std::move(state.psi), coin_psi, steps);
    state.phi = flat_evolve(std::move(state.phi), coin_phi, steps);
    return state;
}

}  // namespace cwalk
