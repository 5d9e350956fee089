#pragma once

#include <ostream>

namespace iim::cli {

enum ExitCode : int {
  kOk = 0,
  kParseOrIo = 1,
  kInvalidArguments = 2,
  kCaseMismatch = 3,
};

/// Runs one `iim` invocation. Human-readable output goes to `out`,
/// diagnostics to `err`; machine output only to paths named on the
/// command line.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iim::cli
