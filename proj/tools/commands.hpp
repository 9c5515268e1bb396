#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace patternlens::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kModelOrIo = 2,
  kComputation = 3,
};

// Runs the command line `args` (without the program name). Payload goes to
// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace patternlens::cli
