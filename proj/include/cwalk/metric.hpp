#pragma once

#include <istream>
#include <string>
#include <vector>

#include "cwalk/lattice.hpp"

namespace cwalk {

enum class MetricKind { constant, gaussian_bump_static, exponential_time, power_time, tabulated };

std::string to_string(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& name);

/// Omega(t, x) sampled on a rectangular (t, x) table, values row-major in t then x.
struct MetricTable {
    std::vector<Real> t;
    std::vector<Real> x;
    std::vector<Real> omega2;  // t.size() * x.size()

    Real at(std::size_t it, std::size_t ix) const { return omega2[it * x.size() + ix]; }
};

/// Reads the `t,x,omega2` CSV format. Throws ConfigError on malformed input and
/// PreconditionError on a nonpositive conformal factor.
MetricTable read_metric_table(std::istream& in);
MetricTable read_metric_table_file(const std::string& path);
void write_metric_table(std::ostream& out, const MetricTable& table);

/// Conformal factor Omega with g = Omega * eta.
///
/// Analytic kinds:
///   constant              Omega = c
///   gaussian_bump_static  Omega = base + A exp(-(x - x_c)^2 / (2 s^2))
///   exponential_time      Omega = c exp(rate t)
///   power_time            Omega = c t^p           (t > 0)
/// Tabulated fields interpolate bilinearly and differentiate with centered
/// differences of step `fd_step`.
class ConformalField {
public:
    static ConformalField constant(Real omega2);
    static ConformalField gaussian_bump(Real amplitude, Real width, Real center = 0, Real base = 1);
    static ConformalField exponential_time(Real coeff, Real rate);
    static ConformalField power_time(Real coeff, Real power);
    static ConformalField tabulated(MetricTable table, Real fd_step = 0);

    MetricKind kind() const { return kind_; }
    /// Short identifier used in experiment tables.
    std::string id() const;
    bool is_static() const;
    /// Kind-specific parameters in declaration order (empty for tabulated).
    const std::vector<Real>& params() const { return params_; }
    const MetricTable* table() const { return kind_ == MetricKind::tabulated ? &table_ : nullptr; }

    Real value(Real t, Real x) const;
    Real dt(Real t, Real x) const;
    Real dx(Real t, Real x) const;
    Real dtt(Real t, Real x) const;
    Real dxx(Real t, Real x) const;

    /// Positive multiple of this field (tabulated values are scaled too).
    ConformalField scaled(Real factor) const;

private:
    ConformalField() = default;
    Real table_value(Real t, Real x) const;

    MetricKind kind_ = MetricKind::constant;
    std::vector<Real> params_;
    MetricTable table_;
    Real fd_step_ = 0;
};

/// Centered finite-difference derivatives of any field, step h.
struct FdDerivatives {
    Real dt, dx, dtt, dxx;
};
FdDerivatives fd_derivatives(const ConformalField& cf, Real t, Real x, Real h);

/// Sampled time interval [t_begin, t_end] on the lattice clock.
struct TimeWindow {
    Real t_begin = 0;
    Real t_end = 0;
};

/// Maximum of Omega over every site and every lattice time t_begin + n dt in the window.
/// Throws PreconditionError on a nonpositive or non-finite sample.
Real omega_scale(const ConformalField& cf, const Grid& grid, const TimeWindow& window);

struct OmegaSlice {
    RealVector omega;  // sqrt(Omega / scale), in (0, 1]
    Real scale = 1;
};

OmegaSlice omega_field(const ConformalField& cf, Real t, const Grid& grid, Real scale);
OmegaSlice omega_field(const ConformalField& cf, Real t, const Grid& grid, const TimeWindow& window);

/// Christoffel classes as printed (no factor 1/2): dOmega/dt / Omega and
/// dOmega/dx / Omega. The conventional symbols for g = Omega eta carry 1/2.
struct CurvatureReport {
    Real christoffel_time_class = 0;
    Real christoffel_space_class = 0;
    Real ricci = 0;
};

CurvatureReport christoffel(const ConformalField& cf, Real t, Real x);
/// 2 ((Omega_t / Omega)^2 - Omega_tt / Omega) / Omega^2, time derivatives only.
Real ricci_scalar(const ConformalField& cf, Real t, Real x);
/// -(d_t^2 - d_x^2) ln Omega / Omega. Convention-bearing extension for
/// spatially varying Omega; not the time-only formula above.
Real ricci_conformal_general(const ConformalField& cf, Real t, Real x);
CurvatureReport curvature_report(const ConformalField& cf, Real t, Real x);

}  // namespace cwalk
