#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace xpathsat::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kYes = 0,          // SAT, equivalent, success
  kNo = 1,           // UNSAT, UNKNOWN, not equivalent
  kInputError = 2,
  kNotMrw = 3,
  kUnsupported = 4,
};

/// Runs `xpathsat` with `args` (program name excluded).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xpathsat::cli
