// SPDX-License-Identifier: Apache-2.0
#include "stabint_cli/json_io.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>

namespace stabint::cli {

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

json to_json(const std::vector<Complex>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

json to_json(const TrigPolynomial& p) { return {{"lo", p.lo()}, {"hi", p.hi()}, {"coeffs", to_json(p.coeffs())}}; }

json to_json(const std::vector<TrigPolynomial>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(to_json(p));
  return out;
}

std::string timestamp_utc() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end != epoch && *end == '\0') t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace stabint::cli
