#include "cli/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

namespace cwalk::cli {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

Real number(const json& j, const std::string& key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    const Real x = v.get<Real>();
    if (!std::isfinite(x)) throw ConfigError(where + "." + key + " must be finite");
    return x;
}

Real number_or(const json& j, const std::string& key, Real fallback, const std::string& where) {
    return j.contains(key) ? number(j, key, where) : fallback;
}

int integer(const json& j, const std::string& key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
    return v.get<int>();
}

Real required(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
    return number(j, key, where);
}

std::vector<Real> number_list(const json& j, const std::string& key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_array() || v.empty()) throw ConfigError(where + "." + key + " must be a nonempty array");
    std::vector<Real> out;
    for (const auto& item : v) {
        if (!item.is_number()) throw ConfigError(where + "." + key + " entries must be numbers");
        out.push_back(item.get<Real>());
    }
    return out;
}

void check(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

void require_decreasing(const std::vector<Real>& values, const std::string& what) {
    for (std::size_t i = 1; i < values.size(); ++i) {
        check(values[i] < values[i - 1], what + " must be strictly decreasing");
    }
}

bool is_lattice_multiple(Real horizon, Real eps) {
    const Real ratio = horizon / eps;
    return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max<Real>(1, ratio);
}

SweepConfig parse_sweep(const json& j) {
    const std::string where = "sweep";
    require_object(j, where);
    reject_unknown(j,
                   {"kind", "eps_list", "eta_list", "amplitudes", "mass", "length", "horizon", "eps", "bump_width",
                    "bump_center", "record_wallclock"},
                   where);
    SweepConfig s;
    if (j.contains("kind")) {
        const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
        if (kind == "flat") s.kind = SweepKind::flat;
        else if (kind == "curved") s.kind = SweepKind::curved;
        else if (kind == "amplitude") s.kind = SweepKind::amplitude;
        else throw ConfigError("sweep.kind must be one of flat, curved, amplitude");
    }
    if (j.contains("eps_list")) {
        s.eps_list = number_list(j, "eps_list", where);
        for (Real e : *s.eps_list) check(e > 0 && e <= 1, "sweep.eps_list entries must lie in (0, 1]");
        require_decreasing(*s.eps_list, "sweep.eps_list");
    }
    if (j.contains("eta_list")) {
        s.eta_list = number_list(j, "eta_list", where);
        for (Real e : s.eta_list) check(e > 0, "sweep.eta_list entries must be positive");
    }
    if (j.contains("amplitudes")) {
        s.amplitudes = number_list(j, "amplitudes", where);
        for (Real a : s.amplitudes) check(a >= 0, "sweep.amplitudes must be nonnegative");
        require_decreasing(s.amplitudes, "sweep.amplitudes");
    }
    s.mass = number_or(j, "mass", s.mass, where);
    s.length = number_or(j, "length", s.length, where);
    s.horizon = number_or(j, "horizon", s.horizon, where);
    s.eps = number_or(j, "eps", s.eps, where);
    s.bump_width = number_or(j, "bump_width", s.bump_width, where);
    s.bump_center = number_or(j, "bump_center", s.bump_center, where);
    if (j.contains("record_wallclock")) {
        check(j.at("record_wallclock").is_boolean(), "sweep.record_wallclock must be a boolean");
        s.record_wallclock = j.at("record_wallclock").get<bool>();
    }
    check(s.length > 0, "sweep.length must be positive");
    check(s.horizon >= 0, "sweep.horizon must be nonnegative");
    check(s.eps > 0 && s.eps <= 1, "sweep.eps must lie in (0, 1]");
    check(s.bump_width > 0, "sweep.bump_width must be positive");
    if (s.eps_list) {
        for (Real e : *s.eps_list) {
            check(is_lattice_multiple(s.length, e) && is_lattice_multiple(s.horizon, e),
                  "sweep.length and sweep.horizon must be integer multiples of every eps");
            check(std::lround(s.length / e) >= 4, "sweep grids need at least 4 sites");
        }
    }
    return s;
}

}  // namespace

ConformalField metric_from_json(const json& spec, const std::string& base_dir) {
    const std::string where = "metric";
    require_object(spec, where);
    if (!spec.contains("kind") || !spec.at("kind").is_string()) throw ConfigError("metric.kind must be a string");
    const MetricKind kind = metric_kind_from_string(spec.at("kind").get<std::string>());
    switch (kind) {
        case MetricKind::constant:
            reject_unknown(spec, {"kind", "omega2"}, where);
            return ConformalField::constant(required(spec, "omega2", where));
        case MetricKind::gaussian_bump_static:
            reject_unknown(spec, {"kind", "amplitude", "width", "center", "base"}, where);
            if (!(required(spec, "width", where) > 0)) throw ConfigError("metric.width must be positive");
            return ConformalField::gaussian_bump(required(spec, "amplitude", where), number(spec, "width", where),
                                                 number_or(spec, "center", 0, where), number_or(spec, "base", 1, where));
        case MetricKind::exponential_time:
            reject_unknown(spec, {"kind", "coeff", "rate"}, where);
            return ConformalField::exponential_time(number_or(spec, "coeff", 1, where), required(spec, "rate", where));
        case MetricKind::power_time:
            reject_unknown(spec, {"kind", "coeff", "power"}, where);
            return ConformalField::power_time(number_or(spec, "coeff", 1, where), required(spec, "power", where));
        case MetricKind::tabulated: {
            reject_unknown(spec, {"kind", "path", "fd_step"}, where);
            if (!spec.contains("path") || !spec.at("path").is_string()) {
                throw ConfigError("metric.path must name a t,x,omega2 CSV file");
            }
            std::filesystem::path path = spec.at("path").get<std::string>();
            if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
            return ConformalField::tabulated(read_metric_table_file(path.string()),
                                             number_or(spec, "fd_step", 0, where));
        }
    }
    throw ConfigError("unsupported metric kind");
}

ConformalField RunConfig::metric() const {
    if (!metric_spec) return ConformalField::constant(1);
    return metric_from_json(*metric_spec, base_dir);
}

PipelineConfig RunConfig::pipeline() const {
    if (!grid) throw ConfigError("config needs a 'grid' section");
    if (!steps) throw ConfigError("config needs 'steps'");
    PipelineConfig cfg;
    cfg.grid = *grid;
    cfg.steps = *steps;
    cfg.mass = mass;
    cfg.eta = eta;
    cfg.t_start = t_start;
    cfg.metric = metric();
    cfg.initial = initial;
    cfg.ancilla_init = ancilla_init;
    cfg.sector = sector;
    cfg.snapshot_every = snapshot_every;
    return cfg;
}

RunConfig parse_config(const json& doc, const std::string& base_dir) {
    require_object(doc, "config");
    reject_unknown(doc,
                   {"grid", "steps", "mass", "eta", "t_start", "metric", "initial", "ancilla_init", "sector",
                    "snapshot_every", "output_dir", "sweep", "metric_window"},
                   "config");
    RunConfig rc;
    rc.source = doc;
    rc.base_dir = base_dir;
    try {
        if (doc.contains("grid")) {
            const json& g = doc.at("grid");
            require_object(g, "grid");
            reject_unknown(g, {"length", "eps"}, "grid");
            const Real length = required(g, "length", "grid");
            const Real eps = required(g, "eps", "grid");
            check(length > 0, "grid.length must be positive");
            check(eps > 0 && eps <= 1, "grid.eps must lie in (0, 1]");
            check(is_lattice_multiple(length, eps), "grid.length must be an integer multiple of grid.eps");
            check(std::lround(length / eps) >= 4, "grid needs at least 4 sites");
            rc.grid = Grid::centered(length, eps);
        }
        if (doc.contains("steps")) {
            rc.steps = integer(doc, "steps", "config");
            check(*rc.steps >= 0, "steps must be nonnegative");
        }
        rc.mass = number_or(doc, "mass", rc.mass, "config");
        rc.eta = number_or(doc, "eta", rc.eta, "config");
        check(rc.eta > 0, "eta must be positive");
        rc.t_start = number_or(doc, "t_start", rc.t_start, "config");
        if (doc.contains("metric")) {
            require_object(doc.at("metric"), "metric");
            rc.metric_spec = doc.at("metric");
        }
        if (doc.contains("initial")) {
            const json& p = doc.at("initial");
            require_object(p, "initial");
            reject_unknown(p, {"x0", "sigma", "k0", "chi", "phase"}, "initial");
            rc.initial.x0 = number_or(p, "x0", rc.initial.x0, "initial");
            rc.initial.sigma = number_or(p, "sigma", rc.initial.sigma, "initial");
            rc.initial.k0 = number_or(p, "k0", rc.initial.k0, "initial");
            rc.initial.chi = number_or(p, "chi", rc.initial.chi, "initial");
            rc.initial.phase = number_or(p, "phase", rc.initial.phase, "initial");
            check(rc.initial.sigma > 0, "initial.sigma must be positive");
        }
        if (doc.contains("ancilla_init")) {
            const json& v = doc.at("ancilla_init");
            check(v.is_string() && (v == "zero" || v == "packet"), "ancilla_init must be 'zero' or 'packet'");
            rc.ancilla_init = v == "zero" ? AncillaInit::zero : AncillaInit::packet;
        }
        if (doc.contains("sector")) {
            const json& v = doc.at("sector");
            check(v.is_string() && (v == "psi" || v == "phi"), "sector must be 'psi' or 'phi'");
            rc.sector = v == "psi" ? Sector::psi : Sector::phi;
        }
        if (doc.contains("snapshot_every")) {
            rc.snapshot_every = integer(doc, "snapshot_every", "config");
            check(rc.snapshot_every >= 0, "snapshot_every must be nonnegative");
        }
        if (doc.contains("output_dir")) {
            check(doc.at("output_dir").is_string(), "output_dir must be a string");
            rc.output_dir = doc.at("output_dir").get<std::string>();
        }
        if (doc.contains("sweep")) rc.sweep = parse_sweep(doc.at("sweep"));
        if (doc.contains("metric_window")) {
            const json& w = doc.at("metric_window");
            require_object(w, "metric_window");
            reject_unknown(w, {"t_begin", "t_end", "t_samples"}, "metric_window");
            MetricWindowConfig mw;
            mw.t_begin = required(w, "t_begin", "metric_window");
            mw.t_end = required(w, "t_end", "metric_window");
            mw.t_samples = w.contains("t_samples") ? integer(w, "t_samples", "metric_window") : 1;
            check(mw.t_end >= mw.t_begin, "metric_window.t_end must be >= t_begin");
            check(mw.t_samples >= 1, "metric_window.t_samples must be >= 1");
            rc.metric_window = mw;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    const std::string base = std::filesystem::absolute(path).parent_path().string();
    return parse_config(doc, base);
}

}  // namespace cwalk::cli
