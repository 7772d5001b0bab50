#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace pstflow::cli {

enum ExitCode : int { kOk = 0, kAnalysisFailure = 1, kUsage = 2 };

// Runs one pstflow command. `args` excludes the program name. Reports go to
// `out` (or the --output file), diagnostics to `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace pstflow::cli
