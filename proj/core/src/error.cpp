// SPDX-License-Identifier: Apache-2.0
#include "stabint/error.hpp"

#include <cstdio>

namespace stabint {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::DensityVanishes: return "DensityVanishes";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NoConvergencePointwise: return "NoConvergencePointwise";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::InconsistentWithGeneric: return "InconsistentWithGeneric";
    case ErrorCode::DegenerateNode: return "DegenerateNode";
    case ErrorCode::NoFixedPoint: return "NoFixedPoint";
    case ErrorCode::DegenerateFunctional: return "DegenerateFunctional";
    case ErrorCode::ExponentSingular: return "ExponentSingular";
    case ErrorCode::MomentInfeasible: return "MomentInfeasible";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotFactorizable: return "NotFactorizable";
  }
  return "Unknown";
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace stabint
