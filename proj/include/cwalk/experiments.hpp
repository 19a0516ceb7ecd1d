#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cwalk/pipeline.hpp"

namespace cwalk {

struct ExperimentRow {
    Real eps = 0;
    Real eta = 0;
    std::string metric_id;
    Real amplitude = 0;
    Real l2_error = 0;
    Real fidelity = 0;
    Real norm_drift = 0;
    Real wallclock_s = 0;
};

/// Least-squares slope of log(error) against log(eps).
struct OrderFit {
    Real slope = 0;
    Real r2 = 0;
};

/// Needs at least 3 points, strictly decreasing eps and positive errors.
OrderFit fit_order(std::span<const Real> eps, std::span<const Real> errors);

struct ExperimentTable {
    std::vector<ExperimentRow> rows;
    std::optional<OrderFit> order;

    /// (metric_id, eta) ascending, then eps and amplitude descending.
    void sort();
    Real max_error() const;
};

/// Shared knobs of every sweep. Refinement keeps `length` and `horizon` fixed
/// and sets dx = dt = eps.
struct SweepSetup {
    Real length = 8;
    Real horizon = 1;
    PacketParams packet;
    int jobs = 1;
    bool record_wallclock = false;
};

/// Flat walk with coin mass `mass` against flat_dirac_exact on a Gaussian packet.
ExperimentTable flat_convergence_sweep(Real mass, std::span<const Real> eps_list, const SweepSetup& setup);

struct CurvedSweepSetup {
    SweepSetup sweep;
    ConformalField metric = ConformalField::constant(1);
    Real t_start = 0;
    AncillaInit ancilla_init = AncillaInit::zero;
    /// psi compares against the omega-weight oracle; phi starts the packet in
    /// the ancilla sector and compares against the complementary weight.
    Sector sector = Sector::psi;
};

/// Massless telescoped pipeline, decoded and compared with conformal_oracle.
ExperimentTable curved_convergence_sweep(const CurvedSweepSetup& setup, std::span<const Real> eps_list,
                                         std::span<const Real> eta_list);

struct AmplitudeSweepSetup {
    CurvedSweepSetup curved;  // metric is replaced per amplitude
    Real eps = 1.0 / 256;
    Real eta = 1;
    Real bump_width = 0.5;
    Real bump_center = 0;
};

/// Gaussian bump Omega = 1 + A exp(-(x - c)^2 / 2 s^2) for each amplitude A.
ExperimentTable amplitude_sweep(const AmplitudeSweepSetup& setup, std::span<const Real> amplitudes);

/// One curved comparison point; exposed for the acceptance harness.
ExperimentRow curved_point(const CurvedSweepSetup& setup, Real eps, Real eta);

}  // namespace cwalk
