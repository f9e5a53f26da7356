#pragma once

#include <iosfwd>

namespace trimpcr::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInputError = 2,
  kDimensionError = 3,
  kCapExceeded = 4,
};

/// Parses argv, runs the chosen subcommand and returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trimpcr::cli
