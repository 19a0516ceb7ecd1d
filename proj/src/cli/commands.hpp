#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace cwalk::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInvariantFailure = 1,
    kConfigError = 2,
    kNumericalFailure = 3,
};

struct Options {
    std::string config_path;
    std::optional<std::string> out_dir;
    int jobs = 1;
    bool per_step = false;
    std::optional<int> steps;    // simulate: overrides the config
    bool selftest_order = false;  // converge
    bool list = false;            // validate
    bool inject_fault = false;    // validate: scale U by 1.01
};

int cmd_simulate(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_converge(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_metric(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_validate(const Options& opts, std::ostream& out, std::ostream& err);

}  // namespace cwalk::cli
