#include "cwalk/encoder.hpp"

#include <cmath>

namespace cwalk {

Real EncoderParams::strength() const { return std::pow(eps, eta); }

void EncoderParams::validate() const {
    if (!(eps > 0 && eps <= 1)) throw PreconditionError("encoder eps must lie in (0, 1]");
    if (!(eta > 0) || !std::isfinite(eta)) throw PreconditionError("encoder eta must be positive");
    const Real e = strength();
    if (!(e > 0)) throw PreconditionError("encoder strength eps^eta underflows to 0");
}

Real encoding_angle(Real omega, Real strength) { return std::acos(std::sqrt(1 - strength) * omega); }

EncodingOperator build_encoder(const Grid& grid, const RealVector& omega, const EncoderParams& params) {
    params.validate();
    if (omega.size() != grid.n_sites) throw std::invalid_argument("build_encoder: omega needs one value per site");
    const Real e = params.strength();
    const Real keep = std::sqrt(1 - e);

    EncodingOperator op;
    op.grid = grid;
    op.strength = e;
    op.a.resize(grid.n_sites);
    op.c.resize(grid.n_sites);
    for (int j = 0; j < grid.n_sites; ++j) {
        const Real w = omega[j];
        if (!(w > 0 && w <= 1)) throw PreconditionError("build_encoder: omega must lie in (0, 1]");
        op.a[j] = keep * w;
        op.c[j] = std::sqrt(1 - (1 - e) * w * w);
    }
    op.d = op.a;
    op.b = op.c;
    return op;
}

Matrix4 EncodingOperator::site_block(int site) const {
    Matrix4 u = Matrix4::Zero();
    const Matrix2 id = identity2();
    u.block<2, 2>(0, 0) = a[site] * id;
    u.block<2, 2>(0, 2) = b[site] * id;
    u.block<2, 2>(2, 0) = -c[site] * id;
    u.block<2, 2>(2, 2) = d[site] * id;
    return u;
}

EncodingOperator EncodingOperator::scaled(Real factor) const {
    EncodingOperator op = *this;
    op.a *= factor;
    op.b *= factor;
    op.c *= factor;
    op.d *= factor;
    return op;
}

EncodingBlocks site_blocks(const EncodingOperator& op, int site) {
    const Real e = op.strength;
    const Matrix2 id = identity2();
    // At e == 1 the diagonal blocks vanish and N, V are undefined; they carry zero
    // weight in every condition, so report them as zero.
    const Real keep = std::sqrt(1 - e);
    const Real relax = std::sqrt(e);
    EncodingBlocks blocks;
    blocks.n = (keep > 0 ? op.a[site] / keep : 0.0) * id;
    blocks.v = (keep > 0 ? op.d[site] / keep : 0.0) * id;
    blocks.h = (op.b[site] / relax) * id;
    blocks.t = (op.c[site] / relax) * id;
    return blocks;
}

EncodingBlocks literal_blocks(Real omega, Real strength) {
    const Real e = strength;
    const Matrix2 id = identity2();
    EncodingBlocks blocks;
    blocks.n = omega * id;
    blocks.h = std::sqrt(1 - omega * omega) * id;
    blocks.t = std::sqrt((1 - (1 - e) * omega * omega) / e) * id;
    blocks.v = std::sqrt((1 - e * (1 - omega * omega)) / (1 - e)) * id;
    return blocks;
}

ConditionResiduals conditions_residual(const EncodingBlocks& blk, Real strength) {
    const Real e = strength;
    const Matrix2 id = identity2();
    ConditionResiduals r;
    r.first = ((1 - e) * blk.n.adjoint() * blk.n + e * blk.t.adjoint() * blk.t - id).cwiseAbs().maxCoeff();
    r.second = ((1 - e) * blk.v.adjoint() * blk.v + e * blk.h.adjoint() * blk.h - id).cwiseAbs().maxCoeff();
    r.cross = (blk.n.adjoint() * blk.h - blk.t.adjoint() * blk.v).cwiseAbs().maxCoeff();
    return r;
}

ConditionResiduals conditions_residual(const EncodingOperator& op) {
    ConditionResiduals worst;
    for (int j = 0; j < op.grid.n_sites; ++j) {
        const ConditionResiduals r = conditions_residual(site_blocks(op, j), op.strength);
        worst.first = std::max(worst.first, r.first);
        worst.second = std::max(worst.second, r.second);
        worst.cross = std::max(worst.cross, r.cross);
    }
    return worst;
}

Real unitarity_residual(const EncodingOperator& op) {
    Real worst = 0;
    for (int j = 0; j < op.grid.n_sites; ++j) {
        const Matrix4 u = op.site_block(j);
        worst = std::max(worst, (u.adjoint() * u - Matrix4::Identity()).cwiseAbs().maxCoeff());
    }
    return worst;
}

DoubledField encode(const DoubledField& state_tilde, const EncodingOperator& op) {
    require_same_grid(state_tilde.grid(), op.grid, "encode");
    const auto& psi = state_tilde.psi;
    const auto& phi = state_tilde.phi;
    DoubledField out(op.grid);
    out.psi.up = op.a.cwiseProduct(psi.up) - op.c.cwiseProduct(phi.up);
    out.psi.down = op.a.cwiseProduct(psi.down) - op.c.cwiseProduct(phi.down);
    out.phi.up = op.b.cwiseProduct(psi.up) + op.d.cwiseProduct(phi.up);
    out.phi.down = op.b.cwiseProduct(psi.down) + op.d.cwiseProduct(phi.down);
    return out;
}

DoubledField decode(const DoubledField& state, const EncodingOperator& op) {
    require_same_grid(state.grid(), op.grid, "decode");
    const auto& psi = state.psi;
    const auto& phi = state.phi;
    DoubledField out(op.grid);
    out.psi.up = op.a.cwiseProduct(psi.up) + op.b.cwiseProduct(phi.up);
    out.psi.down = op.a.cwiseProduct(psi.down) + op.b.cwiseProduct(phi.down);
    out.phi.up = op.d.cwiseProduct(phi.up) - op.c.cwiseProduct(psi.up);
    out.phi.down = op.d.cwiseProduct(phi.down) - op.c.cwiseProduct(psi.down);
    return out;
}

}  // namespace cwalk
