// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "stabint/stabint.hpp"

namespace stabint::cli {

using json = nlohmann::json;

inline constexpr int kConfigVersion = 1;

/// Config problem; path is a JSON-pointer-like location such as "$.f.terms[0].weight".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

enum class Command { Estimate, EstimateNoisy, Minimax, Simulate, Factorize, Validate };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command command);

struct SimulationSettings {
  std::size_t replicates = 10000;
  std::size_t grid_size = 256;
  std::optional<int> lo;  // default: -(fourier window)
  std::optional<int> hi;  // default: N + fourier window
  unsigned threads = 0;
  int perturb_component = 0;
  int perturb_index = -1;
  Complex perturb_offset{0.25, 0.0};
};

struct RunConfig {
  Command command = Command::Estimate;
  double alpha = 2.0;
  Eigen::MatrixXcd weights;  // T x (N+1) after blocking
  std::optional<int> period;
  SpectralDensity f;
  std::optional<SpectralDensity> g;
  std::size_t grid = kDefaultGridSize;
  SolverOptions solver;
  std::optional<DensityClassSpec> density_class;
  MinimaxOptions minimax;
  int probes = 32;
  SimulationSettings simulate;
  std::uint64_t seed = 1;
  TrigPolynomial polynomial;
  double factor_tol = 1e-10;
};

/// Command-line values that take precedence over the document.
struct Overrides {
  std::optional<std::size_t> grid;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> period;
};

/// Parses and schema-checks a config document. Relative sampled-density files resolve against base_dir.
RunConfig parse_config(const json& doc, Command command, const Overrides& overrides = {},
                       const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path, Command command, const Overrides& overrides = {});

/// Two-column "angle,value" text; blank lines and lines starting with '#' are skipped.
SampledDensity read_sampled_density(const std::filesystem::path& path);

}  // namespace stabint::cli
