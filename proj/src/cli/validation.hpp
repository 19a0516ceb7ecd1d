#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cwalk/lattice.hpp"

namespace cwalk::cli {

struct CheckResult {
    bool pass = false;
    std::string detail;
};

struct Check {
    std::string name;
    std::function<CheckResult()> run;
};

struct ValidationOptions {
    /// Test hook: every encoding operator under test is multiplied by this factor.
    Real encoder_fault_scale = 1;
};

/// Invariant suite behind `cwalk validate`. Each check is deterministic and runs
/// in well under a second.
std::vector<Check> builtin_checks(const ValidationOptions& options = {});

}  // namespace cwalk::cli
