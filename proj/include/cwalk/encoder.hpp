#pragma once

#include "cwalk/lattice.hpp"

namespace cwalk {

/// Relaxation strength eps^eta of the encoding.
struct EncoderParams {
    Real eps = 0;
    Real eta = 1;

    Real strength() const;
    void validate() const;
};

using Matrix4 = Eigen::Matrix4cd;

/// Site-local U = [[a I, b I], [-c I, d I]] acting on (psi, phi).
///
/// build_encoder sets a = d = sqrt(1 - e) omega and b = c = sqrt(1 - (1 - e) omega^2),
/// e = eps^eta, i.e. a rotation by arccos(a) tensored with I_2.
struct EncodingOperator {
    Grid grid;
    Real strength = 0;
    RealVector a, b, c, d;

    Matrix4 site_block(int site) const;
    /// Multiplies every coefficient by `factor`. Only meant for fault injection.
    EncodingOperator scaled(Real factor) const;
};

EncodingOperator build_encoder(const Grid& grid, const RealVector& omega, const EncoderParams& params);

/// Rotation angle arccos(sqrt(1 - e) omega) of the per-site block.
Real encoding_angle(Real omega, Real strength);

/// Operator blocks N, H, T, V of the 4x4 form
/// [[sqrt(1-e) N, sqrt(e) H], [-sqrt(e) T, sqrt(1-e) V]].
struct EncodingBlocks {
    Matrix2 n, h, t, v;
};

/// Blocks of the operator at one site.
EncodingBlocks site_blocks(const EncodingOperator& op, int site);

/// Literal block choice N^dagger N = omega^2 I and H^dagger H = (1 - omega^2) I with T, V
/// solved from the first two conditions. Used to document that this choice
/// breaks the cross condition.
EncodingBlocks literal_blocks(Real omega, Real strength);

/// Residuals of
///   (1-e) N^dagger N + e T^dagger T = I
///   (1-e) V^dagger V + e H^dagger H = I
///   N^dagger H - T^dagger V = 0
/// measured in the max-abs entry norm.
struct ConditionResiduals {
    Real first = 0;
    Real second = 0;
    Real cross = 0;

    Real max() const { return std::max({first, second, cross}); }
};

ConditionResiduals conditions_residual(const EncodingBlocks& blocks, Real strength);
/// Maximum over sites.
ConditionResiduals conditions_residual(const EncodingOperator& op);

/// max over sites of |U^dagger U - I_4| (max-abs entry).
Real unitarity_residual(const EncodingOperator& op);

/// Lambda = U^dagger Lambda~ (into the flat frame).
DoubledField encode(const DoubledField& state_tilde, const EncodingOperator& op);
/// Lambda~ = U Lambda (back to the encoded frame).
DoubledField decode(const DoubledField& state, const EncodingOperator& op);

}  // namespace cwalk
