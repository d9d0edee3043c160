#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vise::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kIo = 3,
};

/// Runs the `vise` command line with `args` (argv without the program name).
/// Reports go to `out`, diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vise::cli
