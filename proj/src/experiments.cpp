#include "cwalk/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "cwalk/reference.hpp"

namespace cwalk {

namespace {

// Runs fn(i) for i in [0, count) on up to `jobs` threads; results keep index order.
template <typename Fn>
std::vector<ExperimentRow> parallel_rows(std::size_t count, int jobs, Fn fn) {
    std::vector<ExperimentRow> rows(count);
    const std::size_t workers = std::clamp<std::size_t>(jobs > 0 ? jobs : 1, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) rows[i] = fn(i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    rows[i] = fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

int horizon_steps(Real horizon, Real eps) {
    const Real ratio = horizon / eps;
    const long n = std::lround(ratio);
    if (std::abs(ratio - static_cast<Real>(n)) > 1e-9 * std::max<Real>(1, ratio)) {
        throw std::invalid_argument("sweep horizon must be an integer multiple of every eps");
    }
    return static_cast<int>(n);
}

void require_decreasing(std::span<const Real> eps_list) {
    if (eps_list.empty()) throw std::invalid_argument("sweep needs a nonempty eps list");
    for (std::size_t i = 1; i < eps_list.size(); ++i) {
        if (!(eps_list[i] < eps_list[i - 1])) throw std::invalid_argument("eps list must be strictly decreasing");
    }
}

using Clock = std::chrono::steady_clock;

Real seconds_since(Clock::time_point start) {
    return std::chrono::duration<Real>(Clock::now() - start).count();
}

void attach_order(ExperimentTable& table) {
    if (table.rows.size() < 3) return;
    std::vector<Real> eps, err;
    for (const auto& r : table.rows) {
        if (!(r.l2_error > 0)) return;
        eps.push_back(r.eps);
        err.push_back(r.l2_error);
    }
    table.order = fit_order(eps, err);
}

}  // namespace

OrderFit fit_order(std::span<const Real> eps, std::span<const Real> errors) {
    if (eps.size() != errors.size()) throw std::invalid_argument("fit_order: eps and errors differ in length");
    if (eps.size() < 3) throw std::invalid_argument("fit_order: need at least 3 points");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(errors[i] > 0)) throw std::invalid_argument("fit_order: errors must be positive (log undefined)");
        if (!(eps[i] > 0)) throw std::invalid_argument("fit_order: eps must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw std::invalid_argument("fit_order: eps must be strictly decreasing");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(eps.size());
    Eigen::MatrixX2d design(n, 2);
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = 1;
        design(i, 1) = std::log(eps[i]);
        target[i] = std::log(errors[i]);
    }
    const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(target);
    const Eigen::VectorXd resid = target - design * coef;
    const Real ss_res = resid.squaredNorm();
    const Real ss_tot = (target.array() - target.mean()).matrix().squaredNorm();
    OrderFit fit;
    fit.slope = coef[1];
    fit.r2 = ss_tot > 0 ? 1 - ss_res / ss_tot : 1;
    return fit;
}

void ExperimentTable::sort() {
    std::stable_sort(rows.begin(), rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
        if (a.metric_id != b.metric_id) return a.metric_id < b.metric_id;
        if (a.eta != b.eta) return a.eta < b.eta;
        if (a.eps != b.eps) return a.eps > b.eps;
        return a.amplitude > b.amplitude;
    });
}

Real ExperimentTable::max_error() const {
    Real worst = 0;
    for (const auto& r : rows) worst = std::max(worst, r.l2_error);
    return worst;
}

ExperimentTable flat_convergence_sweep(Real mass, std::span<const Real> eps_list, const SweepSetup& setup) {
    require_decreasing(eps_list);
    ExperimentTable table;
    table.rows = parallel_rows(eps_list.size(), setup.jobs, [&](std::size_t i) {
        const auto start = Clock::now();
        const Real eps = eps_list[i];
        const Grid grid = Grid::centered(setup.length, eps);
        const int steps = horizon_steps(setup.horizon, eps);
        const SpinorField initial = gaussian_packet(grid, setup.packet);
        const SpinorField walked = flat_evolve(initial, CoinParams{eps, mass}, steps);
        const SpinorField exact = flat_dirac_exact(initial, mass, setup.horizon);

        ExperimentRow row;
        row.eps = eps;
        row.metric_id = "flat";
        row.l2_error = l2_distance(walked, exact);
        row.fidelity = fidelity(walked, exact);
        row.norm_drift = std::abs(prob_norm(walked) - prob_norm(initial));
        row.wallclock_s = setup.record_wallclock ? seconds_since(start) : 0;
        return row;
    });
    table.sort();
    attach_order(table);
    return table;
}

ExperimentRow curved_point(const CurvedSweepSetup& setup, Real eps, Real eta) {
    const auto start = Clock::now();
    PipelineConfig cfg;
    cfg.grid = Grid::centered(setup.sweep.length, eps);
    cfg.steps = horizon_steps(setup.sweep.horizon, eps);
    cfg.mass = 0;
    cfg.eta = eta;
    cfg.t_start = setup.t_start;
    cfg.metric = setup.metric;
    cfg.initial = setup.sweep.packet;
    cfg.ancilla_init = setup.ancilla_init;
    cfg.sector = setup.sector;

    const Pipeline pipeline(cfg);
    const DoubledField initial = initial_state(cfg);
    const DoubledField final_state = pipeline.run_telescoped(initial);

    const EncodingOperator u0 = pipeline.encoder_at(cfg.time_at(0));
    const EncodingOperator u_end = pipeline.encoder_at(cfg.time_at(cfg.steps));
    const bool psi_sector = cfg.sector == Sector::psi;
    // omega weight for psi; the complementary weight sqrt(1 - (1 - e) omega^2) for phi
    const RealVector& w0 = psi_sector ? u0.a : u0.b;
    const RealVector& w_end = psi_sector ? u_end.a : u_end.b;
    const SpinorField& start_field = psi_sector ? initial.psi : initial.phi;
    const SpinorField& decoded = psi_sector ? final_state.psi : final_state.phi;
    const SpinorField oracle = conformal_oracle(start_field, w0, w_end, setup.sweep.horizon);

    ExperimentRow row;
    row.eps = eps;
    row.eta = eta;
    row.metric_id = setup.metric.id();
    row.amplitude = setup.metric.kind() == MetricKind::gaussian_bump_static ? setup.metric.params()[0] : 0;
    row.l2_error = l2_distance(decoded, oracle);
    row.fidelity = fidelity(decoded, oracle);
    row.norm_drift = std::abs(total_norm(final_state) - total_norm(initial));
    row.wallclock_s = setup.sweep.record_wallclock ? seconds_since(start) : 0;
    return row;
}

ExperimentTable curved_convergence_sweep(const CurvedSweepSetup& setup, std::span<const Real> eps_list,
                                         std::span<const Real> eta_list) {
    require_decreasing(eps_list);
    if (eta_list.empty()) throw std::invalid_argument("curved sweep needs a nonempty eta list");
    std::vector<std::pair<Real, Real>> points;
    for (Real eta : eta_list) {
        for (Real eps : eps_list) points.emplace_back(eps, eta);
    }
    ExperimentTable table;
    table.rows = parallel_rows(points.size(), setup.sweep.jobs,
                               [&](std::size_t i) { return curved_point(setup, points[i].first, points[i].second); });
    table.sort();
    if (eta_list.size() == 1) attach_order(table);
    return table;
}

ExperimentTable amplitude_sweep(const AmplitudeSweepSetup& setup, std::span<const Real> amplitudes) {
    if (amplitudes.empty()) throw std::invalid_argument("amplitude sweep needs at least one amplitude");
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        if (amplitudes[i] < 0) throw std::invalid_argument("bump amplitudes must be nonnegative");
        if (i > 0 && !(amplitudes[i] < amplitudes[i - 1])) {
            throw std::invalid_argument("amplitudes must be strictly decreasing");
        }
    }
    ExperimentTable table;
    table.rows = parallel_rows(amplitudes.size(), setup.curved.sweep.jobs, [&](std::size_t i) {
        CurvedSweepSetup point = setup.curved;
        point.metric = ConformalField::gaussian_bump(amplitudes[i], setup.bump_width, setup.bump_center);
        return curved_point(point, setup.eps, setup.eta);
    });
    table.sort();
    return table;
}

}  // namespace cwalk
