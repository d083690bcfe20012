#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gaboredge::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kParameterError = 2,
  kIoError = 3,
};

/// Runs one subcommand (detect, eval, sweep, noise, esm-dump). `args`
/// excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace gaboredge::cli
