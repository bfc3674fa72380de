// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "stabint_cli/commands.hpp"
#include "stabint_cli/config.hpp"
#include "stabint_cli/validate.hpp"

namespace {

using namespace stabint;
using namespace stabint::cli;
using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

const std::filesystem::path kConfigs = STABINT_CONFIG_DIR;

json base_estimate() {
  return json::parse(R"({"version": 1, "alpha": 2, "weights": [[0.7, -0.2]],
                         "f": {"kind": "constant", "level": 1}, "grid": 64})");
}

std::string config_error_path(const json& doc, Command command) {
  try {
    parse_config(doc, command);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<none>";
}

TEST(CliConfig, MissingAlphaNamesField) {
  json doc = base_estimate();
  doc.erase("alpha");
  EXPECT_EQ(config_error_path(doc, Command::Estimate), "$.alpha");
}

TEST(CliConfig, UnknownKeyRejected) {
  json doc = base_estimate();
  doc["f"]["levle"] = 2;
  EXPECT_EQ(config_error_path(doc, Command::Estimate), "$.f.levle");
}

TEST(CliConfig, GridMustBePowerOfTwo) {
  json doc = base_estimate();
  doc["grid"] = 100;
  EXPECT_EQ(config_error_path(doc, Command::Estimate), "$.grid");
}

TEST(CliConfig, PeriodBlocksFlatWeights) {
  json doc = base_estimate();
  doc["weights"] = {1, 2, 3, 4};
  doc["period"] = 2;
  doc["f"] = json::parse(R"({"kind": "structured", "dim": 2,
                             "terms": [{"weight": [[1, 0], [0, 1]], "shape": {"kind": "constant", "level": 1}}]})");
  const RunConfig cfg = parse_config(doc, Command::Estimate);
  ASSERT_EQ(cfg.weights.rows(), 2);
  ASSERT_EQ(cfg.weights.cols(), 2);
  EXPECT_EQ(cfg.weights(1, 0), Complex(2.0));
  EXPECT_EQ(cfg.weights(0, 1), Complex(3.0));
}

TEST(CliConfig, OverridesApply) {
  Overrides o;
  o.grid = 128;
  o.seed = 99;
  o.tol = 1e-9;
  const RunConfig cfg = parse_config(base_estimate(), Command::Estimate, o);
  EXPECT_EQ(cfg.grid, 128u);
  EXPECT_EQ(cfg.seed, 99u);
  EXPECT_EQ(cfg.solver.newton_tol, 1e-9);
}

TEST(CliCommands, EstimateSinglePointUnitDensity) {
  const CommandOutput out = run_estimate(parse_config(base_estimate(), Command::Estimate));
  EXPECT_EQ(out.exit_code, kExitOk);
  EXPECT_NEAR(out.document["c"][0][0][0].get<double>(), 0.7, 1e-12);
  // complex weights enter through the signed power, which conjugates
  EXPECT_NEAR(out.document["c"][0][0][1].get<double>(), 0.2, 1e-12);
}

TEST(CliCommands, EstimateSinglePointFlatDensity) {
  json doc = base_estimate();
  doc["f"]["level"] = 1 / (2 * kPi);
  const CommandOutput out = run_estimate(parse_config(doc, Command::Estimate));
  EXPECT_NEAR(out.document["c"][0][0][0].get<double>(), 0.7 / (2 * kPi), 1e-12);
  EXPECT_NEAR(out.document["error"].get<double>(), 0.49 + 0.04, 1e-12);
}

TEST(CliCommands, ExitCodeMapping) {
  EXPECT_EQ(exit_code_for(ErrorCode::InvalidArgument), kExitConfigError);
  EXPECT_EQ(exit_code_for(ErrorCode::ShapeMismatch), kExitConfigError);
  EXPECT_EQ(exit_code_for(ErrorCode::NoConvergence), kExitSolverFailed);
  EXPECT_EQ(exit_code_for(ErrorCode::NotFactorizable), kExitSolverFailed);
}

TEST(CliRun, MissingConfigFileIsConfigError) {
  RunRequest req;
  req.command = Command::Estimate;
  req.config = "/nonexistent/config.json";
  std::ostringstream out, err;
  EXPECT_EQ(run(req, out, err), kExitConfigError);
  EXPECT_FALSE(err.str().empty());
}

TEST(CliRun, OutputIsDeterministic) {
  ::setenv("SOURCE_DATE_EPOCH", "0", 1);
  RunRequest req;
  req.command = Command::Estimate;
  req.config = kConfigs / "example2_alpha2.json";
  req.overrides.grid = 256;
  std::ostringstream a, b, err;
  ASSERT_EQ(run(req, a, err), kExitOk) << err.str();
  ASSERT_EQ(run(req, b, err), kExitOk) << err.str();
  EXPECT_EQ(a.str(), b.str());
  const json doc = json::parse(a.str());
  EXPECT_NEAR(doc["c"][0][0][0].get<double>(), 4.0 / 7.0, 1e-10);
  EXPECT_NEAR(doc["error"].get<double>(), 16 * kPi / 7, 1e-10);
}

TEST(CliRun, SampleConfigsLoad) {
  for (const char* name : {"example2_alpha43", "example2_alpha2", "constant_density", "noisy_two_component",
                           "periodic", "minimax_d0", "minimax_dminusone", "simulate_gaussian", "factorize", "sampled"}) {
    const std::string stem(name);
    Command c = Command::Estimate;
    if (stem.starts_with("noisy")) c = Command::EstimateNoisy;
    if (stem.starts_with("minimax")) c = Command::Minimax;
    if (stem.starts_with("simulate")) c = Command::Simulate;
    if (stem.starts_with("factorize")) c = Command::Factorize;
    EXPECT_NO_THROW(load_config(kConfigs / (stem + ".json"), c)) << stem;
  }
}

TEST(CliValidate, BuiltinManifestPasses) {
  const ValidationReport rep = run_validation(builtin_manifest(), 4096);
  for (const auto& row : rep.rows) EXPECT_TRUE(row.passed) << row.id << ": " << row.note;
  EXPECT_TRUE(rep.all_passed());
  bool saw_error_row = false;
  for (const auto& row : rep.rows)
    if (row.id == "ar1_alpha43_error") {
      saw_error_row = true;
      EXPECT_LE(std::abs(row.value - 5.57), 0.05);
    }
  EXPECT_TRUE(saw_error_row);
}

TEST(CliValidate, UnknownCheckFailsWithNote) {
  const std::string manifest =
      R"({"format_version": 1, "checks": [{"id": "no_such_check", "kind": "derived", "description": "x"}]})";
  const ValidationReport rep = run_validation(manifest, 64);
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_FALSE(rep.rows[0].passed);
  EXPECT_FALSE(rep.rows[0].note.empty());
}

}  // namespace
