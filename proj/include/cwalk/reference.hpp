#pragma once

#include "cwalk/lattice.hpp"
#include "cwalk/metric.hpp"

namespace cwalk {

/// Continuum massless transport: up moves by -T, down by +T. T must be a
/// multiple of dt, so the result is an exact lattice translation.
SpinorField transport_exact(const SpinorField& psi0, Real horizon);

/// Exact solution of i d_t Psi = i sigma_z d_x Psi - mass sigma_x Psi on the
/// periodic grid: each discrete Fourier mode k evolves by
/// exp(i T (k sigma_z + mass sigma_x)).
SpinorField flat_dirac_exact(const SpinorField& psi0, Real mass, Real horizon);

/// 2x2 propagator of one Fourier mode e^{ikx} over time T.
Matrix2 dirac_mode_propagator(Real k, Real mass, Real horizon);

inline constexpr Real kOmegaFloor = 1e-6;

/// Massless curved solution by conformal weight:
/// transport_exact(omega0 * psi0, T) / omegaT, pointwise.
SpinorField conformal_oracle(const SpinorField& psi_tilde0, const RealVector& omega0, const RealVector& omega_t,
                             Real horizon);

struct CnResult {
    SpinorField field;
    bool under_resolved = false;
    Real weighted_norm_initial = 0;  // sum_x Omega |Psi|^2 dx
    Real weighted_norm_final = 0;
};

/// Crank-Nicolson integration of
///   (d_t + Omega_t / 2 Omega) Psi = sigma_z (d_x + Omega_x / 2 Omega) Psi + i mass Omega sigma_x Psi
/// with three-point centered differences in x and the metric terms evaluated at
/// the half step. `t_start` is the metric clock at the initial time.
CnResult cn_evolve(const SpinorField& psi0, const ConformalField& cf, Real mass, Real horizon, int substeps,
                   Real t_start = 0);

}  // namespace cwalk
