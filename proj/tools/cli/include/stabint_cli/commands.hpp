// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "stabint_cli/config.hpp"

namespace stabint::cli {

enum ExitCode : int { kExitOk = 0, kExitValidationFailed = 1, kExitConfigError = 2, kExitSolverFailed = 3 };

/// Input-domain errors map to kExitConfigError, numerical failures to kExitSolverFailed.
int exit_code_for(ErrorCode code) noexcept;

/// A result document plus optional CSV text and the exit status it implies.
struct CommandOutput {
  json document;
  std::string csv;
  std::string table;  // human-readable summary printed by validate
  int exit_code = kExitOk;
};

CommandOutput run_estimate(const RunConfig& config);
CommandOutput run_estimate_noisy(const RunConfig& config);
CommandOutput run_minimax(const RunConfig& config);
CommandOutput run_simulate(const RunConfig& config);
CommandOutput run_factorize(const RunConfig& config);
CommandOutput run_validate(const RunConfig& config);

CommandOutput dispatch(const RunConfig& config);

struct RunRequest {
  Command command = Command::Estimate;
  std::optional<std::filesystem::path> config;
  Overrides overrides;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> csv;
};

/// Loads, dispatches and writes artifacts. The validate table, and the document unless a path is
/// given, go to `out`; messages go to `err`.
int run(const RunRequest& request, std::ostream& out, std::ostream& err);

}  // namespace stabint::cli
