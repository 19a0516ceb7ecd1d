#include "cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "cli/config.hpp"
#include "cli/validation.hpp"
#include "cwalk/io.hpp"

namespace cwalk::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
int guarded(const char* command, std::ostream& err, Fn&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << command << ": config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const PreconditionError& e) {
        err << command << ": numerical precondition failed: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::invalid_argument& e) {
        err << command << ": invalid parameters: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << command << ": numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

RunConfig load(const Options& opts) {
    if (opts.config_path.empty()) throw ConfigError("--config PATH is required");
    return load_config(opts.config_path);
}

fs::path output_dir(const Options& opts, const RunConfig& rc) {
    fs::path dir = opts.out_dir ? fs::path(*opts.out_dir) : fs::path(rc.output_dir);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

void write_manifest(const fs::path& path, json manifest) {
    std::ofstream out = open_output(path);
    out << manifest.dump(2) << '\n';
}

json base_manifest(const char* command, const Options& opts, const RunConfig& rc) {
    json m;
    m["command"] = command;
    m["config_path"] = opts.config_path;
    m["config"] = rc.source;
    return m;
}

Real seconds_since(Clock::time_point start) { return std::chrono::duration<Real>(Clock::now() - start).count(); }

SweepSetup sweep_setup(const SweepConfig& s, const RunConfig& rc, int jobs) {
    SweepSetup setup;
    setup.length = s.length;
    setup.horizon = s.horizon;
    setup.packet = rc.initial;
    setup.jobs = jobs;
    setup.record_wallclock = s.record_wallclock;
    return setup;
}

int selftest_order(std::ostream& out) {
    const std::vector<Real> eps{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
    std::vector<Real> errors;
    for (Real e : eps) errors.push_back(3.0 * e * e);
    const OrderFit fit = fit_order(eps, errors);
    out << std::setprecision(12) << "selftest-order: slope=" << fit.slope << " r2=" << fit.r2 << '\n';
    return std::abs(fit.slope - 2) <= 1e-10 ? kSuccess : kInvariantFailure;
}

}  // namespace

int cmd_simulate(const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded("simulate", err, [&] {
        const auto start = Clock::now();
        const RunConfig rc = load(opts);
        PipelineConfig cfg = rc.pipeline();
        if (opts.steps) {
            if (*opts.steps < 0) throw ConfigError("--steps must be nonnegative");
            cfg.steps = *opts.steps;
        }
        const fs::path dir = output_dir(opts, rc);

        const Pipeline pipeline(cfg);
        const DoubledField initial = initial_state(cfg);
        const std::vector<Snapshot> snapshots =
            opts.per_step ? pipeline.run_per_step(initial) : pipeline.run_telescoped_snapshots(initial);

        Real drift = 0;
        for (const auto& s : snapshots) drift = std::max(drift, std::abs(total_norm(s.state) - total_norm(initial)));

        {
            std::ofstream psi = open_output(dir / "snapshots_psi.csv");
            write_snapshot_csv(psi, snapshots, Sector::psi);
            std::ofstream phi = open_output(dir / "snapshots_phi.csv");
            write_snapshot_csv(phi, snapshots, Sector::phi);
        }

        json manifest = base_manifest("simulate", opts, rc);
        manifest["mode"] = opts.per_step ? "per_step" : "telescoped";
        manifest["steps"] = cfg.steps;
        manifest["n_sites"] = cfg.grid.n_sites;
        manifest["omega_scale"] = pipeline.omega_scale();
        manifest["norm_drift"] = drift;
        manifest["wallclock_s"] = seconds_since(start);
        manifest["outputs"] = {"snapshots_psi.csv", "snapshots_phi.csv"};
        write_manifest(dir / "manifest_simulate.json", manifest);

        out << "simulate: " << manifest["mode"].get<std::string>() << " run of " << cfg.steps << " steps on "
            << cfg.grid.n_sites << " sites, norm drift " << std::scientific << std::setprecision(3) << drift
            << ", outputs in " << dir.string() << '\n';
        return kSuccess;
    });
}

int cmd_converge(const Options& opts, std::ostream& out, std::ostream& err) {
    if (opts.selftest_order) return selftest_order(out);
    return guarded("converge", err, [&] {
        const auto start = Clock::now();
        const RunConfig rc = load(opts);
        if (!rc.sweep) throw ConfigError("config needs a 'sweep' section");
        const SweepConfig& s = *rc.sweep;

        ExperimentTable table;
        std::string kind;
        switch (s.kind) {
            case SweepKind::flat:
                kind = "flat";
                if (!s.eps_list) throw ConfigError("sweep.eps_list is required");
                table = flat_convergence_sweep(s.mass, *s.eps_list, sweep_setup(s, rc, opts.jobs));
                break;
            case SweepKind::curved: {
                kind = "curved";
                if (!s.eps_list) throw ConfigError("sweep.eps_list is required");
                CurvedSweepSetup setup;
                setup.sweep = sweep_setup(s, rc, opts.jobs);
                setup.metric = rc.metric();
                setup.t_start = rc.t_start;
                setup.ancilla_init = rc.ancilla_init;
                setup.sector = rc.sector;
                table = curved_convergence_sweep(setup, *s.eps_list, s.eta_list);
                break;
            }
            case SweepKind::amplitude: {
                kind = "amplitude";
                if (s.amplitudes.empty()) throw ConfigError("sweep.amplitudes is required");
                AmplitudeSweepSetup setup;
                setup.curved.sweep = sweep_setup(s, rc, opts.jobs);
                setup.curved.t_start = rc.t_start;
                setup.curved.ancilla_init = rc.ancilla_init;
                setup.curved.sector = rc.sector;
                setup.eps = s.eps;
                setup.eta = s.eta_list.front();
                setup.bump_width = s.bump_width;
                setup.bump_center = s.bump_center;
                table = amplitude_sweep(setup, s.amplitudes);
                break;
            }
        }

        const fs::path dir = output_dir(opts, rc);
        {
            std::ofstream csv = open_output(dir / "table.csv");
            write_table_csv(csv, table);
        }

        Real drift = 0;
        for (const auto& r : table.rows) drift = std::max(drift, r.norm_drift);
        json manifest = base_manifest("converge", opts, rc);
        manifest["kind"] = kind;
        manifest["rows"] = table.rows.size();
        manifest["max_error"] = table.max_error();
        manifest["norm_drift"] = drift;
        if (table.order) manifest["fitted_order"] = {{"slope", table.order->slope}, {"r2", table.order->r2}};
        json timings = json::array();
        for (const auto& r : table.rows) timings.push_back(r.wallclock_s);
        manifest["row_wallclock_s"] = timings;
        manifest["wallclock_s"] = seconds_since(start);
        manifest["outputs"] = {"table.csv"};
        write_manifest(dir / "manifest_converge.json", manifest);

        out << "converge: kind=" << kind << " rows=" << table.rows.size() << std::scientific << std::setprecision(6)
            << " max_error=" << table.max_error();
        if (table.order) {
            out << std::fixed << std::setprecision(4) << " fitted_order=" << table.order->slope
                << " r2=" << table.order->r2;
        } else {
            out << " fitted_order=n/a";
        }
        out << '\n';
        return kSuccess;
    });
}

int cmd_metric(const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded("metric", err, [&] {
        const auto start = Clock::now();
        const RunConfig rc = load(opts);
        if (!rc.metric_spec) throw ConfigError("config needs a 'metric' section");
        if (!rc.grid) throw ConfigError("config needs a 'grid' section");
        const MetricWindowConfig window = rc.metric_window.value_or(MetricWindowConfig{rc.t_start, rc.t_start, 1});
        const ConformalField cf = rc.metric();
        const auto samples = sample_metric(cf, *rc.grid, window.t_begin, window.t_end, window.t_samples);

        const fs::path dir = output_dir(opts, rc);
        {
            std::ofstream csv = open_output(dir / "metric.csv");
            write_metric_csv(csv, samples);
        }
        json manifest = base_manifest("metric", opts, rc);
        manifest["rows"] = samples.size();
        manifest["wallclock_s"] = seconds_since(start);
        manifest["outputs"] = {"metric.csv"};
        write_manifest(dir / "manifest_metric.json", manifest);
        out << "metric: " << samples.size() << " samples of " << cf.id() << " written to "
            << (dir / "metric.csv").string() << '\n';
        return kSuccess;
    });
}

int cmd_validate(const Options& opts, std::ostream& out, std::ostream& err) {
    ValidationOptions vopts;
    if (opts.inject_fault) vopts.encoder_fault_scale = 1.01;
    const auto checks = builtin_checks(vopts);
    if (opts.list) {
        for (const auto& c : checks) out << c.name << '\n';
        return kSuccess;
    }
    bool all = true;
    json results = json::array();
    for (const auto& c : checks) {
        CheckResult r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r = {false, std::string("threw: ") + e.what()};
        }
        all = all && r.pass;
        out << (r.pass ? "PASS " : "FAIL ") << c.name << "  " << r.detail << '\n';
        results.push_back({{"name", c.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    if (opts.out_dir) {
        try {
            fs::create_directories(*opts.out_dir);
            json manifest;
            manifest["command"] = "validate";
            manifest["inject_fault"] = opts.inject_fault;
            manifest["checks"] = results;
            write_manifest(fs::path(*opts.out_dir) / "manifest_validate.json", manifest);
        } catch (const std::exception& e) {
            err << "validate: could not write manifest: " << e.what() << '\n';
        }
    }
    return all ? kSuccess : kInvariantFailure;
}

}  // namespace cwalk::cli
