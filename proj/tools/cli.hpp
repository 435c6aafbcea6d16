#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chainshadow::cli {

enum ExitCode : int { Ok = 0, PropertyFails = 1, InputError = 2, Inconclusive = 3 };

/// Runs the command line `args` (program name excluded), writing results to
/// `out` (or the --out file) and diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chainshadow::cli
