#pragma once

namespace lapsim::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,   // unexpected internal error
  kConfigError = 2,
  kInputError = 3,
  kIntegrityError = 4,
};

/// Full command-line front end (synth, degrade-one, precorrect, eval,
/// flow-viz, curve-plot). Returns the process exit code.
int run(int argc, const char* const* argv);

} // namespace lapsim::cli
