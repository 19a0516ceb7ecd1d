#include "cli/validation.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cwalk/encoder.hpp"
#include "cwalk/pipeline.hpp"
#include "cwalk/reference.hpp"
#include "cwalk/walk.hpp"

namespace cwalk::cli {

namespace {

std::string describe(const char* what, Real value, const char* op, Real bound) {
    std::ostringstream s;
    s.precision(3);
    s << what << " = " << std::scientific << value << " (" << op << " " << bound << ")";
    return s.str();
}

CheckResult at_most(const char* what, Real value, Real bound) {
    return {value <= bound, describe(what, value, "<=", bound)};
}

Matrix2 random_unitary(std::mt19937_64& rng) {
    std::normal_distribution<Real> gauss;
    Matrix2 m;
    for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = Complex(gauss(rng), gauss(rng));
    return Eigen::HouseholderQR<Matrix2>(m).householderQ();
}

SpinorField random_field(const Grid& grid, std::mt19937_64& rng) {
    std::normal_distribution<Real> gauss;
    SpinorField f(grid);
    for (int j = 0; j < grid.n_sites; ++j) {
        f.up[j] = Complex(gauss(rng), gauss(rng));
        f.down[j] = Complex(gauss(rng), gauss(rng));
    }
    f *= 1 / std::sqrt(prob_norm(f));
    return f;
}

RealVector random_omega(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<Real> u(0.05, 1.0);
    RealVector w(n);
    for (int j = 0; j < n; ++j) w[j] = u(rng);
    return w;
}

PipelineConfig bump_pipeline(Real eps, int steps) {
    PipelineConfig cfg;
    cfg.grid = Grid::centered(4, eps);
    cfg.steps = steps;
    cfg.metric = ConformalField::gaussian_bump(0.3, 0.5);
    cfg.initial = {-1.0, 0.3, 0, 0, 0};
    return cfg;
}

}  // namespace

std::vector<Check> builtin_checks(const ValidationOptions& options) {
    const Real fault = options.encoder_fault_scale;
    std::vector<Check> checks;

    checks.push_back({"encoder_unitarity", [fault] {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<Real> eps(1e-3, 1.0);
        const Grid g = Grid::make(64, 1.0 / 64);
        Real worst = 0;
        for (int trial = 0; trial < 20; ++trial) {
            const EncoderParams p{eps(rng), trial % 3 == 0 ? 0.5 : (trial % 3 == 1 ? 1.0 : 2.0)};
            const EncodingOperator op = build_encoder(g, random_omega(g.n_sites, rng), p).scaled(fault);
            worst = std::max(worst, unitarity_residual(op));
        }
        return at_most("max |U^dagger U - I|", worst, 1e-14);
    }});

    checks.push_back({"encoder_conditions", [fault] {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<Real> eps(1e-3, 1.0);
        const Grid g = Grid::make(64, 1.0 / 64);
        Real worst = 0;
        for (int trial = 0; trial < 20; ++trial) {
            const EncoderParams p{eps(rng), 1.0};
            const EncodingOperator op = build_encoder(g, random_omega(g.n_sites, rng), p).scaled(fault);
            worst = std::max(worst, conditions_residual(op).max());
        }
        return at_most("max condition residual", worst, 1e-12);
    }});

    checks.push_back({"no_go_density", [] {
        std::mt19937_64 rng(13);
        const Grid g = Grid::make(128, 1.0 / 128);
        Real worst = 0;
        for (int trial = 0; trial < 10; ++trial) {
            const SpinorField f = random_field(g, rng);
            std::vector<Matrix2> unitaries(g.n_sites);
            for (auto& u : unitaries) u = random_unitary(rng);
            const SpinorField rotated = apply_site_matrices(f, unitaries);
            worst = std::max(worst, (rotated.density() - f.density()).cwiseAbs().maxCoeff());
        }
        return at_most("max site density change", worst, 1e-15);
    }});

    checks.push_back({"flat_unitarity", [] {
        std::mt19937_64 rng(14);
        const Grid g = Grid::make(256, 1.0 / 256);
        const SpinorField f = random_field(g, rng);
        const SpinorField out = flat_evolve(f, CoinParams{g.dx, 3.7}, 1000);
        return at_most("norm drift after 1000 steps", std::abs(prob_norm(out) - prob_norm(f)), 1e-12);
    }});

    checks.push_back({"massless_exactness", [] {
        std::mt19937_64 rng(15);
        const Grid g = Grid::make(200, 1.0 / 100);
        const SpinorField f = random_field(g, rng);
        const SpinorField walked = flat_evolve(f, CoinParams{g.dx, 0}, 150);
        return at_most("walk vs exact transport", l2_distance(walked, transport_exact(f, 150 * g.dt)), 1e-12);
    }});

    checks.push_back({"telescoping_equivalence", [] {
        Real worst = 0;
        for (const auto& metric : {ConformalField::gaussian_bump(0.3, 0.5), ConformalField::exponential_time(1, 0.8)}) {
            PipelineConfig cfg = bump_pipeline(1.0 / 32, 300);
            cfg.metric = metric;
            cfg.mass = 1.5;
            const Pipeline p(cfg);
            const DoubledField per_step = p.run_per_step().back().state;
            worst = std::max(worst, l2_distance(per_step, p.run_telescoped()));
        }
        return at_most("per-step vs telescoped", worst, 1e-10);
    }});

    checks.push_back({"pipeline_unitarity", [] {
        PipelineConfig cfg = bump_pipeline(1.0 / 32, 300);
        cfg.metric = ConformalField::exponential_time(1, -0.5);
        cfg.mass = 0.7;
        cfg.ancilla_init = AncillaInit::packet;
        const auto trajectory = Pipeline(cfg).run_per_step();
        const Real drift = std::abs(total_norm(trajectory.back().state) - total_norm(trajectory.front().state));
        return at_most("doubled norm drift", drift, 1e-12);
    }});

    checks.push_back({"zeroth_order_residual", [] {
        PipelineConfig flat = bump_pipeline(1.0 / 64, 10);
        flat.metric = ConformalField::constant(2.5);
        const Real constant_residual = zeroth_order_residual(flat, 0);
        if (constant_residual > 1e-14) return at_most("constant-metric residual", constant_residual, 1e-14);
        Real coarse = zeroth_order_residual(bump_pipeline(1.0 / 32, 32), 0);
        std::ostringstream detail;
        detail << "ratios";
        bool pass = true;
        for (Real eps : {1.0 / 64, 1.0 / 128}) {
            const Real fine = zeroth_order_residual(bump_pipeline(eps, static_cast<int>(std::lround(1 / eps))), 0);
            const Real ratio = coarse / fine;
            pass = pass && ratio >= 1.6 && ratio <= 2.4;
            detail << ' ' << ratio;
            coarse = fine;
        }
        detail << " (in [1.6, 2.4])";
        return CheckResult{pass, detail.str()};
    }});

    checks.push_back({"curvature_power_law", [] {
        const ConformalField cf = ConformalField::power_time(1, 2);
        Real worst = 0;
        for (int i = 0; i <= 20; ++i) {
            const Real t = 1 + i / 20.0;
            worst = std::max(worst, std::abs(ricci_scalar(cf, t, 0.3) - 4 / std::pow(t, 6)));
        }
        const Real constant = std::abs(ricci_scalar(ConformalField::constant(3), 0.4, 0.1));
        return at_most("max |R - 4/t^6| (and constant R)", std::max(worst, constant), 1e-10);
    }});

    return checks;
}

}  // namespace cwalk::cli
