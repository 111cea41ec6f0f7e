#pragma once

#include <string>
#include <vector>

#include "qdev/cli/config.hpp"
#include "qdev/cli/records.hpp"

namespace qdev::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 2,
  kNonConvergence = 3,
  kIoFailure = 4,
};

/// Parses argv (argv[0] is the program name), runs the subcommand and maps
/// errors to exit codes. Diagnostics go to stderr.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

/// Executes an already validated config and returns its exit code.
int execute(const RunConfig& config);

/// The temporal spectrum record for the config's (n, |Lambda|) or calibration preset.
SpectrumRecord compute_spectrum_record(const RunConfig& config);

}  // namespace qdev::cli
