// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stabint {

enum class ErrorCode {
  InvalidArgument,
  ShapeMismatch,
  NonFiniteValue,
  GridTooCoarse,
  DensityVanishes,
  NoConvergence,
  NoConvergencePointwise,
  SingularJacobian,
  SingularSystem,
  InconsistentWithGeneric,
  DegenerateNode,
  NoFixedPoint,
  DegenerateFunctional,
  ExponentSingular,
  MomentInfeasible,
  NotPositive,
  NotFactorizable,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Six significant digits, for messages.
std::string format_value(double v);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stabint
