#include "cwalk/metric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace cwalk {

namespace {

void require_positive_omega(Real value, Real t, Real x) {
    if (!(value > 0) || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << "nonpositive conformal factor Omega(" << t << ", " << x << ") = " << value;
        throw PreconditionError(msg.str());
    }
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

// Locates u in a sorted axis; returns lower index and weight of the upper node.
std::pair<std::size_t, Real> bracket(const std::vector<Real>& axis, Real u) {
    if (axis.size() == 1 || u <= axis.front()) return {0, 0};
    if (u >= axis.back()) return {axis.size() - 2, 1};
    const auto it = std::upper_bound(axis.begin(), axis.end(), u);
    const std::size_t hi = static_cast<std::size_t>(it - axis.begin());
    const std::size_t lo = hi - 1;
    return {lo, (u - axis[lo]) / (axis[hi] - axis[lo])};
}

Real min_spacing(const std::vector<Real>& axis) {
    Real h = std::numeric_limits<Real>::infinity();
    for (std::size_t i = 1; i < axis.size(); ++i) h = std::min(h, axis[i] - axis[i - 1]);
    return h;
}

}  // namespace

std::string to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::constant: return "constant";
        case MetricKind::gaussian_bump_static: return "gaussian_bump_static";
        case MetricKind::exponential_time: return "exponential_time";
        case MetricKind::power_time: return "power_time";
        case MetricKind::tabulated: return "tabulated";
    }
    return "unknown";
}

MetricKind metric_kind_from_string(const std::string& name) {
    for (auto k : {MetricKind::constant, MetricKind::gaussian_bump_static, MetricKind::exponential_time,
                   MetricKind::power_time, MetricKind::tabulated}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown metric kind '" + name + "'");
}

MetricTable read_metric_table(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "t,x,omega2") {
        throw ConfigError("metric table must start with header 't,x,omega2'");
    }
    std::vector<std::array<Real, 3>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        std::array<Real, 3> row{};
        std::stringstream ss(line);
        std::string cell;
        for (int c = 0; c < 3; ++c) {
            if (!std::getline(ss, cell, ',')) {
                throw ConfigError("metric table line " + std::to_string(line_no) + ": expected 3 columns");
            }
            try {
                std::size_t used = 0;
                row[c] = std::stod(trim(cell), &used);
                if (used != trim(cell).size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ConfigError("metric table line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
        }
        if (std::getline(ss, cell, ',')) {
            throw ConfigError("metric table line " + std::to_string(line_no) + ": too many columns");
        }
        rows.push_back(row);
    }
    if (rows.empty()) throw ConfigError("metric table has no rows");

    MetricTable table;
    for (const auto& r : rows) {
        if (r[0] != rows.front()[0]) break;
        table.x.push_back(r[1]);
    }
    const std::size_t nx = table.x.size();
    if (nx < 2) throw ConfigError("metric table needs at least 2 x samples per time");
    if (rows.size() % nx != 0) throw ConfigError("metric table is not a complete (t, x) grid");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t it = i / nx;
        const std::size_t ix = i % nx;
        if (ix == 0) {
            if (it > 0 && !(rows[i][0] > table.t.back())) {
                throw ConfigError("metric table times must be strictly increasing");
            }
            table.t.push_back(rows[i][0]);
        }
        if (rows[i][0] != table.t.back() || rows[i][1] != table.x[ix]) {
            throw ConfigError("metric table must be row-major in t then x with a shared x axis");
        }
        if (ix > 0 && !(table.x[ix] > table.x[ix - 1])) {
            throw ConfigError("metric table x values must be strictly increasing");
        }
        require_positive_omega(rows[i][2], rows[i][0], rows[i][1]);
        table.omega2.push_back(rows[i][2]);
    }
    return table;
}

MetricTable read_metric_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open metric table '" + path + "'");
    return read_metric_table(in);
}

void write_metric_table(std::ostream& out, const MetricTable& table) {
    out << "t,x,omega2\n" << std::setprecision(17);
    for (std::size_t it = 0; it < table.t.size(); ++it) {
        for (std::size_t ix = 0; ix < table.x.size(); ++ix) {
            out << table.t[it] << ',' << table.x[ix] << ',' << table.at(it, ix) << '\n';
        }
    }
}

ConformalField ConformalField::constant(Real omega2) {
    if (!(omega2 > 0)) throw PreconditionError("nonpositive conformal factor: constant Omega must be > 0");
    ConformalField cf;
    cf.kind_ = MetricKind::constant;
    cf.params_ = {omega2};
    return cf;
}

ConformalField ConformalField::gaussian_bump(Real amplitude, Real width, Real center, Real base) {
    if (!(width > 0)) throw std::invalid_argument("gaussian bump width must be positive");
    if (!(base > 0) || !(base + std::min<Real>(amplitude, 0) > 0)) {
        throw PreconditionError("nonpositive conformal factor: gaussian bump must stay positive");
    }
    ConformalField cf;
    cf.kind_ = MetricKind::gaussian_bump_static;
    cf.params_ = {amplitude, width, center, base};
    return cf;
}

ConformalField ConformalField::exponential_time(Real coeff, Real rate) {
    if (!(coeff > 0)) throw PreconditionError("nonpositive conformal factor: exponential coefficient must be > 0");
    ConformalField cf;
    cf.kind_ = MetricKind::exponential_time;
    cf.params_ = {coeff, rate};
    return cf;
}

ConformalField ConformalField::power_time(Real coeff, Real power) {
    if (!(coeff > 0)) throw PreconditionError("nonpositive conformal factor: power-law coefficient must be > 0");
    ConformalField cf;
    cf.kind_ = MetricKind::power_time;
    cf.params_ = {coeff, power};
    return cf;
}

ConformalField ConformalField::tabulated(MetricTable table, Real fd_step) {
    if (table.x.size() < 2 || table.t.empty() || table.omega2.size() != table.t.size() * table.x.size()) {
        throw ConfigError("tabulated metric needs a complete table with at least 2 x samples");
    }
    for (std::size_t it = 0; it < table.t.size(); ++it) {
        for (std::size_t ix = 0; ix < table.x.size(); ++ix) {
            require_positive_omega(table.at(it, ix), table.t[it], table.x[ix]);
        }
    }
    ConformalField cf;
    cf.kind_ = MetricKind::tabulated;
    if (fd_step <= 0) fd_step = std::min(min_spacing(table.x), min_spacing(table.t));
    cf.fd_step_ = fd_step;
    cf.table_ = std::move(table);
    return cf;
}

std::string ConformalField::id() const { return to_string(kind_); }

bool ConformalField::is_static() const {
    switch (kind_) {
        case MetricKind::constant:
        case MetricKind::gaussian_bump_static: return true;
        case MetricKind::exponential_time: return params_[1] == 0;
        case MetricKind::power_time: return params_[1] == 0;
        case MetricKind::tabulated: return table_.t.size() == 1;
    }
    return false;
}

ConformalField ConformalField::scaled(Real factor) const {
    if (!(factor > 0)) throw std::invalid_argument("metric rescaling factor must be positive");
    ConformalField cf = *this;
    switch (kind_) {
        case MetricKind::constant:
        case MetricKind::exponential_time:
        case MetricKind::power_time: cf.params_[0] *= factor; break;
        case MetricKind::gaussian_bump_static:
            cf.params_[0] *= factor;
            cf.params_[3] *= factor;
            break;
        case MetricKind::tabulated:
            for (auto& v : cf.table_.omega2) v *= factor;
            break;
    }
    return cf;
}

Real ConformalField::table_value(Real t, Real x) const {
    const auto [ix, wx] = bracket(table_.x, x);
    const auto [it, wt] = bracket(table_.t, t);
    const std::size_t ix1 = std::min(ix + 1, table_.x.size() - 1);
    const std::size_t it1 = std::min(it + 1, table_.t.size() - 1);
    const Real lower = (1 - wx) * table_.at(it, ix) + wx * table_.at(it, ix1);
    const Real upper = (1 - wx) * table_.at(it1, ix) + wx * table_.at(it1, ix1);
    return (1 - wt) * lower + wt * upper;
}

Real ConformalField::value(Real t, Real x) const {
    switch (kind_) {
        case MetricKind::constant: return params_[0];
        case MetricKind::gaussian_bump_static: {
            const Real r = x - params_[2];
            return params_[3] + params_[0] * std::exp(-r * r / (2 * params_[1] * params_[1]));
        }
        case MetricKind::exponential_time: return params_[0] * std::exp(params_[1] * t);
        case MetricKind::power_time: return params_[0] * std::pow(t, params_[1]);
        case MetricKind::tabulated: return table_value(t, x);
    }
    return 0;
}

Real ConformalField::dt(Real t, Real x) const {
    switch (kind_) {
        case MetricKind::constant:
        case MetricKind::gaussian_bump_static: return 0;
        case MetricKind::exponential_time: return params_[1] * value(t, x);
        case MetricKind::power_time: return params_[0] * params_[1] * std::pow(t, params_[1] - 1);
        case MetricKind::tabulated:
            if (table_.t.size() == 1) return 0;
            return (table_value(t + fd_step_, x) - table_value(t - fd_step_, x)) / (2 * fd_step_);
    }
    return 0;
}

Real ConformalField::dx(Real t, Real x) const {
    switch (kind_) {
        case MetricKind::constant:
        case MetricKind::exponential_time:
        case MetricKind::power_time: return 0;
        case MetricKind::gaussian_bump_static: {
            const Real s2 = params_[1] * params_[1];
            const Real r = x - params_[2];
            return -params_[0] * r / s2 * std::exp(-r * r / (2 * s2));
        }
        case MetricKind::tabulated:
            return (table_value(t, x + fd_step_) - table_value(t, x - fd_step_)) / (2 * fd_step_);
    }
    return 0;
}

Real ConformalField::dtt(Real t, Real x) const {
    switch (kind_) {
        case MetricKind::constant:
        case MetricKind::gaussian_bump_static: return 0;
        case MetricKind::exponential_time: return params_[1] * params_[1] * value(t, x);
        case MetricKind::power_time:
            return params_[0] * params_[1] * (params_[1] - 1) * std::pow(t, params_[1] - 2);
        case MetricKind::tabulated:
            if (table_.t.size() == 1) return 0;
            return (table_value(t + fd_step_, x) - 2 * table_value(t, x) + table_value(t - fd_step_, x)) /
                   (fd_step_ * fd_step_);
    }
    return 0;
}

Real ConformalField::dxx(Real t, Real x) const {
    switch (kind_) {
        case MetricKind::constant:
        case MetricKind::exponential_time:
        case MetricKind::power_time: return 0;
        case MetricKind::gaussian_bump_static: {
            const Real s2 = params_[1] * params_[1];
            const Real r = x - params_[2];
            return params_[0] * (r * r / s2 - 1) / s2 * std::exp(-r * r / (2 * s2));
        }
        case MetricKind::tabulated:
            return (table_value(t, x + fd_step_) - 2 * table_value(t, x) + table_value(t, x - fd_step_)) /
                   (fd_step_ * fd_step_);
    }
    return 0;
}

FdDerivatives fd_derivatives(const ConformalField& cf, Real t, Real x, Real h) {
    const Real c = cf.value(t, x);
    const Real tp = cf.value(t + h, x), tm = cf.value(t - h, x);
    const Real xp = cf.value(t, x + h), xm = cf.value(t, x - h);
    return {(tp - tm) / (2 * h), (xp - xm) / (2 * h), (tp - 2 * c + tm) / (h * h), (xp - 2 * c + xm) / (h * h)};
}

Real omega_scale(const ConformalField& cf, const Grid& grid, const TimeWindow& window) {
    if (window.t_end < window.t_begin) throw std::invalid_argument("time window must have t_end >= t_begin");
    const long n_times = cf.is_static() ? 1 : std::lround((window.t_end - window.t_begin) / grid.dt) + 1;
    Real scale = 0;
    for (long n = 0; n < n_times; ++n) {
        const Real t = window.t_begin + n * grid.dt;
        for (int j = 0; j < grid.n_sites; ++j) {
            const Real v = cf.value(t, grid.position(j));
            require_positive_omega(v, t, grid.position(j));
            scale = std::max(scale, v);
        }
    }
    return scale;
}

OmegaSlice omega_field(const ConformalField& cf, Real t, const Grid& grid, Real scale) {
    if (!(scale > 0)) throw PreconditionError("nonpositive conformal factor scale");
    OmegaSlice slice;
    slice.scale = scale;
    slice.omega.resize(grid.n_sites);
    for (int j = 0; j < grid.n_sites; ++j) {
        const Real v = cf.value(t, grid.position(j));
        require_positive_omega(v, t, grid.position(j));
        // samples off the lattice clock may exceed the window maximum by rounding
        slice.omega[j] = std::min<Real>(1, std::sqrt(v / scale));
    }
    return slice;
}

OmegaSlice omega_field(const ConformalField& cf, Real t, const Grid& grid, const TimeWindow& window) {
    return omega_field(cf, t, grid, omega_scale(cf, grid, window));
}

CurvatureReport christoffel(const ConformalField& cf, Real t, Real x) {
    const Real omega = cf.value(t, x);
    require_positive_omega(omega, t, x);
    CurvatureReport r;
    r.christoffel_time_class = cf.dt(t, x) / omega;
    r.christoffel_space_class = cf.dx(t, x) / omega;
    return r;
}

Real ricci_scalar(const ConformalField& cf, Real t, Real x) {
    const Real omega = cf.value(t, x);
    require_positive_omega(omega, t, x);
    const Real rate = cf.dt(t, x) / omega;
    return 2 * (rate * rate - cf.dtt(t, x) / omega) / (omega * omega);
}

Real ricci_conformal_general(const ConformalField& cf, Real t, Real x) {
    const Real omega = cf.value(t, x);
    require_positive_omega(omega, t, x);
    const Real gt = cf.dt(t, x) / omega;
    const Real gx = cf.dx(t, x) / omega;
    const Real log_tt = cf.dtt(t, x) / omega - gt * gt;
    const Real log_xx = cf.dxx(t, x) / omega - gx * gx;
    return -(log_tt - log_xx) / omega;
}

CurvatureReport curvature_report(const ConformalField& cf, Real t, Real x) {
    CurvatureReport r = christoffel(cf, t, x);
    r.ricci = ricci_scalar(cf, t, x);
    return r;
}

}  // namespace cwalk
