#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bellreg::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 2,
  kNumericalFailure = 3,
  kConvergenceFailure = 4,
};

/// Runs one CLI invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellreg::cli
