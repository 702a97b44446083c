#pragma once

#include <ostream>

namespace mcomp {

/// Exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitPrecondition = 1,
  kExitInvariant = 2,
  kExitParse = 3,
};

/// Entry point of the `mcomp` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mcomp
