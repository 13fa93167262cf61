#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace h8 {

/// Exit codes of the command-line driver.
enum ExitCode : int { kExitOk = 0, kExitStrictFail = 1, kExitUsage = 2, kExitResource = 3 };

/// Runs the h8 command line. `args` excludes the program name. Row payloads
/// go to --out (or `out`), the one-line summary and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace h8
