#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rwt {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitNumeric = 3 };

/// Runs one command. `args` excludes the program name. Human output and
/// `--json -` go to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rwt
