#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cellseg::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kBadConfig = 3,
  kUnreadableInput = 4,
  kUnwritableOutput = 5,
  kStageFailure = 6,
};

/// Runs the command line `args` (without the program name), writing
/// progress to `out` and diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cellseg::cli
