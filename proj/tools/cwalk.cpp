// cwalk: conformal-metric quantum walk simulator.
//
//   cwalk simulate --config run.json [--per-step] [--steps N] [--out-dir DIR]
//   cwalk converge --config sweep.json [--jobs N] | --selftest-order
//   cwalk metric   --config metric.json
//   cwalk validate [--list] [--inject-fault]

#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace cwalk::cli;

    CLI::App app{"Quantum walk simulation of Dirac propagation on conformal (1+1)D spacetimes"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opts;
    std::string out_dir;
    app.add_option("--config", opts.config_path, "JSON run configuration");
    app.add_option("--out-dir", out_dir, "Output directory (overrides output_dir in the config)");
    app.add_option("--jobs", opts.jobs, "Parallel sweep jobs")->check(CLI::PositiveNumber);
    app.add_flag("--per-step", opts.per_step, "Re-encode at every step instead of telescoping");

    auto* simulate = app.add_subcommand("simulate", "Encode, run the homogeneous walk, decode; write snapshots");
    int steps = -1;
    simulate->add_option("--steps", steps, "Override the configured number of steps");

    auto* converge = app.add_subcommand("converge", "Run a convergence sweep and write the experiment table");
    converge->add_flag("--selftest-order", opts.selftest_order, "Fit the order of synthetic quadratic data");

    auto* metric = app.add_subcommand("metric", "Tabulate Omega, omega, Christoffel classes and Ricci scalar");

    auto* validate = app.add_subcommand("validate", "Run the built-in invariant suite");
    validate->add_flag("--list", opts.list, "List check names without running them");
    validate->add_flag("--inject-fault", opts.inject_fault, "Scale encoding operators by 1.01 (test hook)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    if (!out_dir.empty()) opts.out_dir = out_dir;
    if (simulate->parsed() && steps >= 0) opts.steps = steps;
    if (simulate->parsed() && simulate->count("--steps") && steps < 0) {
        std::cerr << "simulate: --steps must be nonnegative\n";
        return kConfigError;
    }

    if (simulate->parsed()) return cmd_simulate(opts, std::cout, std::cerr);
    if (converge->parsed()) return cmd_converge(opts, std::cout, std::cerr);
    if (metric->parsed()) return cmd_metric(opts, std::cout, std::cerr);
    return cmd_validate(opts, std::cout, std::cerr);
}
