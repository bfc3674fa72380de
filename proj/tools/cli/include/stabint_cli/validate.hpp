// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace stabint::cli {

struct CheckRow {
  std::string id;
  std::string kind;  // published, derived, closed_form, erratum
  std::string description;
  double value = 0.0;
  double reference = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
  double seconds = 0.0;
};

struct ValidationReport {
  std::vector<CheckRow> rows;
  bool all_passed() const noexcept;
};

/// Runs every check listed in the manifest. Checks the manifest names but the tool does not
/// implement fail with a note, as do checks whose computation throws.
ValidationReport run_validation(std::string_view manifest_json, std::size_t grid_size = 4096);

/// The manifest compiled into the tool.
std::string_view builtin_manifest();

std::string format_table(const ValidationReport& report);
nlohmann::json to_json(const ValidationReport& report);

}  // namespace stabint::cli
