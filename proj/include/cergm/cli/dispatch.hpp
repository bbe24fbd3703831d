#pragma once

#include <exception>
#include <ostream>
#include <string>

#include "cergm/cli/run_config.hpp"

namespace cergm::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidConfig = 2,
  kExitInfeasible = 3,
  kExitNumerical = 4,
};

// Exit status for an exception escaping a command.
int exit_code_for(const std::exception& error);

/// Runs the configured command and returns the artifact text (a JSON
/// document or CSV table). Throws on failure.
std::string render(const RunConfig& config);

/// render() plus delivery to config.output_path (stdout when empty). Errors
/// are reported on `err`; the return value is the process exit status.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace cergm::cli
