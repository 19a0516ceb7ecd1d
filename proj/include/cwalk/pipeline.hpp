#pragma once

#include <vector>

#include "cwalk/encoder.hpp"
#include "cwalk/metric.hpp"
#include "cwalk/walk.hpp"

namespace cwalk {

enum class AncillaInit { zero, packet };
enum class Sector { psi, phi };

/// Encode once, run the homogeneous doubled walk, decode once.
struct PipelineConfig {
    Grid grid;
    int steps = 0;
    Real mass = 0;        // coin theta, same in both sectors
    Real eta = 1;         // encoder strength exponent; eps is grid.dx
    Real t_start = 0;     // metric clock at step 0
    ConformalField metric = ConformalField::constant(1);
    PacketParams initial;
    AncillaInit ancilla_init = AncillaInit::zero;
    Sector sector = Sector::psi;
    int snapshot_every = 0;  // 0: record only the first and last state

    CoinParams coin() const { return {grid.dx, mass}; }
    EncoderParams encoder() const { return {grid.dx, eta}; }
    TimeWindow window() const { return {t_start, t_start + steps * grid.dt}; }
    Real time_at(int step) const { return t_start + step * grid.dt; }
};

struct Snapshot {
    int step = 0;
    Real t = 0;
    DoubledField state;  // encoded frame
};

/// Encoded-frame initial state: the packet goes into `sector`; the other sector
/// holds zero or a copy of the packet according to `ancilla_init`.
DoubledField initial_state(const PipelineConfig& cfg);

/// A configured pipeline. Construction validates the config and fixes the
/// conformal normalization Omega_max over the whole run window.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig cfg);

    const PipelineConfig& config() const { return cfg_; }
    Real omega_scale() const { return scale_; }

    /// The single construction routine used by every run mode.
    EncodingOperator encoder_at(Real t) const;

    /// U(t + dt) (I x S) Q U^dagger(t) applied to an encoded-frame state.
    DoubledField conjugated_step(const DoubledField& state_tilde, Real t) const;

    /// Iterates conjugated_step from `initial`; snapshots at the configured cadence
    /// plus the initial and final states.
    std::vector<Snapshot> run_per_step(const DoubledField& initial) const;
    std::vector<Snapshot> run_per_step() const { return run_per_step(initial_state(cfg_)); }

    /// U(T) [(I x S) Q]^steps U^dagger(0) applied to `initial`.
    DoubledField run_telescoped(const DoubledField& initial) const;
    DoubledField run_telescoped() const { return run_telescoped(initial_state(cfg_)); }

    /// Telescoped run that also decodes copies of the bulk state at the snapshot
    /// cadence. The bulk itself is never re-encoded.
    std::vector<Snapshot> run_telescoped_snapshots(const DoubledField& initial) const;

    /// Flat-frame state U^dagger(t) Lambda~ for inspection.
    DoubledField to_flat_frame(const DoubledField& state_tilde, Real t) const;

    /// Largest spectral-norm distance from the identity of the one-step map with
    /// the uniform shift undone, S^-1 U(t+dt) (I x S) Q U^dagger(t), over every
    /// site neighborhood. Probed with localized inputs.
    Real zeroth_order_residual(Real t) const;

private:
    PipelineConfig cfg_;
    Real scale_ = 1;
};

std::vector<Snapshot> run_per_step(const PipelineConfig& cfg);
DoubledField run_telescoped(const PipelineConfig& cfg);
DoubledField conjugated_step(const DoubledField& state_tilde, Real t, const PipelineConfig& cfg);
Real zeroth_order_residual(const PipelineConfig& cfg, Real t);

}  // namespace cwalk
