#include "cwalk/io.hpp"

#include <algorithm>
#include <iomanip>

namespace cwalk {

void write_snapshot_csv(std::ostream& out, const std::vector<Snapshot>& snapshots, Sector sector) {
    out << kSnapshotHeader << '\n' << std::setprecision(17);
    for (const auto& snap : snapshots) {
        const SpinorField& f = sector == Sector::psi ? snap.state.psi : snap.state.phi;
        for (int j = 0; j < f.size(); ++j) {
            const Complex u = f.up[j];
            const Complex d = f.down[j];
            out << snap.t << ',' << f.grid.position(j) << ',' << u.real() << ',' << u.imag() << ',' << d.real()
                << ',' << d.imag() << ',' << (std::norm(u) + std::norm(d)) << '\n';
        }
    }
}

void write_table_csv(std::ostream& out, const ExperimentTable& table) {
    out << kTableHeader << '\n' << std::setprecision(17);
    for (const auto& r : table.rows) {
        out << r.eps << ',' << r.eta << ',' << r.metric_id << ',' << r.amplitude << ',' << r.l2_error << ','
            << r.fidelity << ',' << r.norm_drift << ',' << r.wallclock_s << '\n';
    }
}

std::vector<MetricSample> sample_metric(const ConformalField& cf, const Grid& grid, Real t_begin, Real t_end,
                                        int t_samples) {
    if (t_samples < 1) throw std::invalid_argument("metric sampling needs at least one time");
    if (t_end < t_begin) throw std::invalid_argument("metric window must have t_end >= t_begin");
    std::vector<Real> times(t_samples);
    for (int i = 0; i < t_samples; ++i) {
        times[i] = t_samples == 1 ? t_begin : t_begin + (t_end - t_begin) * i / (t_samples - 1);
    }
    Real scale = 0;
    for (Real t : times) scale = std::max(scale, omega_scale(cf, grid, {t, t}));

    std::vector<MetricSample> samples;
    samples.reserve(times.size() * grid.n_sites);
    for (Real t : times) {
        const OmegaSlice slice = omega_field(cf, t, grid, scale);
        for (int j = 0; j < grid.n_sites; ++j) {
            const Real x = grid.position(j);
            const CurvatureReport rep = curvature_report(cf, t, x);
            samples.push_back({t, x, cf.value(t, x), slice.omega[j], rep.christoffel_time_class,
                               rep.christoffel_space_class, rep.ricci});
        }
    }
    return samples;
}

void write_metric_csv(std::ostream& out, const std::vector<MetricSample>& samples) {
    out << kMetricHeader << '\n' << std::setprecision(17);
    for (const auto& s : samples) {
        out << s.t << ',' << s.x << ',' << s.omega2 << ',' << s.omega << ',' << s.gamma_t << ',' << s.gamma_x << ','
            << s.ricci << '\n';
    }
}

}  // namespace cwalk
