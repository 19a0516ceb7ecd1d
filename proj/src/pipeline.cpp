#include "cwalk/pipeline.hpp"

#include <cmath>

namespace cwalk {

namespace {

void validate(const PipelineConfig& cfg) {
    if (cfg.steps < 0) throw std::invalid_argument("pipeline steps must be nonnegative");
    if (cfg.snapshot_every < 0) throw std::invalid_argument("snapshot cadence must be nonnegative");
    if (cfg.grid.n_sites < 4 || !(cfg.grid.dx > 0) || cfg.grid.dt != cfg.grid.dx) {
        throw std::invalid_argument("pipeline grid must satisfy n_sites >= 4 and dt == dx > 0");
    }
    cfg.encoder().validate();
}

bool is_snapshot_step(const PipelineConfig& cfg, int step) {
    if (step == 0 || step == cfg.steps) return true;
    return cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0;
}

}  // namespace

DoubledField initial_state(const PipelineConfig& cfg) {
    const SpinorField packet = gaussian_packet(cfg.grid, cfg.initial);
    const SpinorField other = cfg.ancilla_init == AncillaInit::packet ? packet : SpinorField(cfg.grid);
    if (cfg.sector == Sector::psi) return DoubledField(packet, other);
    return DoubledField(other, packet);
}

Pipeline::Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) {
    validate(cfg_);
    scale_ = cwalk::omega_scale(cfg_.metric, cfg_.grid, cfg_.window());
}

EncodingOperator Pipeline::encoder_at(Real t) const {
    const OmegaSlice slice = omega_field(cfg_.metric, t, cfg_.grid, scale_);
    return build_encoder(cfg_.grid, slice.omega, cfg_.encoder());
}

DoubledField Pipeline::conjugated_step(const DoubledField& state_tilde, Real t) const {
    const DoubledField flat = encode(state_tilde, encoder_at(t));
    const DoubledField moved = doubled_step(flat, cfg_.coin());
    return decode(moved, encoder_at(t + cfg_.grid.dt));
}

std::vector<Snapshot> Pipeline::run_per_step(const DoubledField& initial) const {
    require_same_grid(initial.grid(), cfg_.grid, "run_per_step");
    std::vector<Snapshot> trajectory;
    DoubledField state = initial;
    trajectory.push_back({0, cfg_.time_at(0), state});
    for (int n = 0; n < cfg_.steps; ++n) {
        state = conjugated_step(state, cfg_.time_at(n));
        if (is_snapshot_step(cfg_, n + 1)) trajectory.push_back({n + 1, cfg_.time_at(n + 1), state});
    }
    return trajectory;
}

DoubledField Pipeline::run_telescoped(const DoubledField& initial) const {
    require_same_grid(initial.grid(), cfg_.grid, "run_telescoped");
    DoubledField bulk = encode(initial, encoder_at(cfg_.time_at(0)));
    bulk = evolve_bulk(std::move(bulk), cfg_.coin(), cfg_.coin(), cfg_.steps);
    return decode(bulk, encoder_at(cfg_.time_at(cfg_.steps)));
}

std::vector<Snapshot> Pipeline::run_telescoped_snapshots(const DoubledField& initial) const {
    require_same_grid(initial.grid(), cfg_.grid, "run_telescoped_snapshots");
    std::vector<Snapshot> trajectory;
    DoubledField bulk = encode(initial, encoder_at(cfg_.time_at(0)));
    int done = 0;
    trajectory.push_back({0, cfg_.time_at(0), decode(bulk, encoder_at(cfg_.time_at(0)))});
    for (int n = 1; n <= cfg_.steps; ++n) {
        if (!is_snapshot_step(cfg_, n)) continue;
        bulk = evolve_bulk(std::move(bulk), cfg_.coin(), cfg_.coin(), n - done);
        done = n;
        trajectory.push_back({n, cfg_.time_at(n), decode(bulk, encoder_at(cfg_.time_at(n)))});
    }
    return trajectory;
}

DoubledField Pipeline::to_flat_frame(const DoubledField& state_tilde, Real t) const {
    return encode(state_tilde, encoder_at(t));
}

Real Pipeline::zeroth_order_residual(Real t) const {
    const Grid& g = cfg_.grid;
    const int n = g.n_sites;
    constexpr int radius = 1;
    constexpr int width = 2 * radius + 1;
    constexpr int comps = 4;

    // Probes sharing a residue class must have disjoint neighborhoods.
    int stride = n;
    for (int s = width; s < n; ++s) {
        if (n % s == 0) {
            stride = s;
            break;
        }
    }

    const EncodingOperator before = encoder_at(t);
    const EncodingOperator after = encoder_at(t + g.dt);
    const CoinParams coin = cfg_.coin();

    auto component = [](DoubledField& f, int c) -> ComplexVector& {
        switch (c) {
            case 0: return f.psi.up;
            case 1: return f.psi.down;
            case 2: return f.phi.up;
            default: return f.phi.down;
        }
    };

    std::vector<Eigen::MatrixXcd> local(n, Eigen::MatrixXcd::Zero(width * comps, comps));
    for (int r = 0; r < stride; ++r) {
        for (int c = 0; c < comps; ++c) {
            DoubledField probe(g);
            for (int j = r; j < n; j += stride) component(probe, c)[j] = 1;

            DoubledField out = doubled_step(encode(probe, before), coin);
            out = decode(out, after);
            out = DoubledField(shift_inverse_apply(out.psi), shift_inverse_apply(out.phi));

            for (int j = r; j < n; j += stride) {
                for (int k = -radius; k <= radius; ++k) {
                    const int site = g.wrap(j + k);
                    for (int oc = 0; oc < comps; ++oc) {
                        local[j]((k + radius) * comps + oc, c) = component(out, oc)[site];
                    }
                }
                local[j](radius * comps + c, c) -= 1;
            }
        }
    }

    Real worst = 0;
    for (const auto& block : local) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
        worst = std::max(worst, svd.singularValues()(0));
    }
    return worst;
}

std::vector<Snapshot> run_per_step(const PipelineConfig& cfg) { return Pipeline(cfg).run_per_step(); }

DoubledField run_telescoped(const PipelineConfig& cfg) { return Pipeline(cfg).run_telescoped(); }

DoubledField conjugated_step(const DoubledField& state_tilde, Real t, const PipelineConfig& cfg) {
    return Pipeline(cfg).conjugated_step(state_tilde, t);
}

Real zeroth_order_residual(const PipelineConfig& cfg, Real t) { return Pipeline(cfg).zeroth_order_residual(t); }

}  // namespace cwalk
