// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <string>
#include <vector>

#include <CLI11/CLI11.hpp>

#include "stabint_cli/commands.hpp"

namespace {

struct Flags {
  std::string config;
  std::size_t grid = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string csv;
  int period = 0;
};

void add_common(CLI::App& sub, Flags& flags, bool config_required) {
  auto* cfg = sub.add_option("--config", flags.config, "problem config (JSON)");
  if (config_required) cfg->required();
  sub.add_option("--grid", flags.grid, "grid size M (power of two)");
  sub.add_option("--tol", flags.tol, "solver tolerance");
  sub.add_option("--seed", flags.seed, "random seed");
  sub.add_option("--out", flags.out, "write the result document here instead of stdout");
  sub.add_option("--csv", flags.csv, "write grid samples or per-replicate errors as CSV");
  sub.add_option("--period", flags.period, "treat weights as a scalar periodic sequence of this period");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace stabint::cli;
  CLI::App app{"Interpolation of harmonizable stable sequences"};
  app.require_subcommand(1);
  app.set_version_flag("--version", STABINT_VERSION_STRING);

  const std::vector<std::pair<Command, std::string>> commands = {
      {Command::Estimate, "optimal coefficients, characteristic and error (noiseless)"},
      {Command::EstimateNoisy, "optimal estimate from noisy observations"},
      {Command::Minimax, "least favorable density and minimax characteristic for a class"},
      {Command::Simulate, "Monte-Carlo comparison of the optimal and a perturbed estimator"},
      {Command::Factorize, "causal factor of a nonnegative trigonometric polynomial"},
      {Command::Validate, "run the built-in reference checks"},
  };
  Flags flags;
  std::vector<std::pair<Command, CLI::App*>> subs;
  for (const auto& [command, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(command_name(command)), help);
    add_common(*sub, flags, command != Command::Validate);
    subs.emplace_back(command, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  RunRequest request;
  for (const auto& [command, sub] : subs) {
    if (!sub->parsed()) continue;
    request.command = command;
    if (sub->count("--config")) request.config = flags.config;
    if (sub->count("--grid")) request.overrides.grid = flags.grid;
    if (sub->count("--tol")) request.overrides.tol = flags.tol;
    if (sub->count("--seed")) request.overrides.seed = flags.seed;
    if (sub->count("--period")) request.overrides.period = flags.period;
    if (sub->count("--out")) request.out = flags.out;
    if (sub->count("--csv")) request.csv = flags.csv;
  }
  return run(request, std::cout, std::cerr);
}
