#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace confound::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kFalse = 1,       // boolean verdicts (dsep, backdoor, corr --r3) that came out false
    kUsage = 2,
    kModel = 3,       // parse / validation / structure errors
    kMath = 4,        // positivity, infeasible endpoints, zero-probability evidence, caps
};

/// Runs one invocation. `args` excludes the program name. Normal output goes
/// to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace confound::cli
