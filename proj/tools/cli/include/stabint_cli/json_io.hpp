// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stabint/stabint.hpp"

namespace stabint::cli {

using json = nlohmann::json;

json to_json(Complex z);
/// Rows of [re, im] pairs.
json to_json(const Eigen::MatrixXcd& m);
json to_json(const Eigen::VectorXcd& v);
json to_json(const std::vector<Complex>& v);
json to_json(const TrigPolynomial& p);
json to_json(const std::vector<TrigPolynomial>& ps);

/// UTC time in ISO 8601; SOURCE_DATE_EPOCH, when set, replaces the clock.
std::string timestamp_utc();

}  // namespace stabint::cli
