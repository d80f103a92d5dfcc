#pragma once

#include <iosfwd>

namespace plap {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kNumericalFailure = 2,
  kVerificationFailure = 3,
};

/// Parses argv (argv[0] is the program name), runs one subcommand and maps
/// failures onto exit codes. Tables go to `out`, diagnostics to `err`.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace plap
