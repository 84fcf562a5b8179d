#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cover_cli {

enum ExitCode : int {
  kExitOk = 0,          // valid / feasible / report complete
  kExitNegative = 1,    // invalid / infeasible
  kExitTimeout = 2,
  kExitUsage = 3,       // usage or input error
  kExitSelfCheck = 4,   // a preset disagreed with its reference values
};

/// Entry point behind the `cover` executable. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cover_cli
