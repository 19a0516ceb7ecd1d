#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cwalk/experiments.hpp"
#include "cwalk/pipeline.hpp"

namespace cwalk {

inline constexpr const char* kSnapshotHeader = "t,x,re_up,im_up,re_dn,im_dn,prob";
inline constexpr const char* kTableHeader = "eps,eta,metric_id,amplitude,l2_error,fidelity,norm_drift,wallclock_s";
inline constexpr const char* kMetricHeader = "t,x,omega2,omega,gamma_t,gamma_x,ricci";

/// One row per site per snapshot for the chosen sector; reals with 17 significant digits.
void write_snapshot_csv(std::ostream& out, const std::vector<Snapshot>& snapshots, Sector sector);
void write_table_csv(std::ostream& out, const ExperimentTable& table);

struct MetricSample {
    Real t, x, omega2, omega, gamma_t, gamma_x, ricci;
};

/// Samples Omega, the normalized weight, Christoffel classes and the Ricci
/// scalar at `t_samples` evenly spaced times over the window and every grid site.
std::vector<MetricSample> sample_metric(const ConformalField& cf, const Grid& grid, Real t_begin, Real t_end,
                                        int t_samples);
void write_metric_csv(std::ostream& out, const std::vector<MetricSample>& samples);

}  // namespace cwalk
