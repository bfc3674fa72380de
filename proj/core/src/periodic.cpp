// SPDX-License-Identifier: Apache-2.0
#include "stabint/periodic.hpp"

#include <string>

#include "stabint/error.hpp"

namespace stabint {

std::pair<int, int> block_index(int j, int period) {
  if (period < 1) throw Error(ErrorCode::InvalidArgument, "period must be >= 1");
  if (j < 0) throw Error(ErrorCode::InvalidArgument, "scalar index must be nonnegative");
  return {j / period, j % period};
}

int flat_index(int block, int component, int period) {
  if (period < 1) throw Error(ErrorCode::InvalidArgument, "period must be >= 1");
  if (component < 0 || component >= period || block < 0)
    throw Error(ErrorCode::InvalidArgument, "block/component out of range");
  return block * period + component;
}

Eigen::MatrixXcd block_weights(const PeriodicSpec& spec) {
  if (spec.period < 1) throw Error(ErrorCode::InvalidArgument, "period must be >= 1");
  if (spec.horizon < 0) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 0");
  const std::size_t expected = static_cast<std::size_t>(spec.period) * static_cast<std::size_t>(spec.horizon + 1);
  if (spec.weights.size() != expected)
    throw Error(ErrorCode::ShapeMismatch, "periodic weights: expected " + std::to_string(expected) + " entries, got " +
                                              std::to_string(spec.weights.size()));
  Eigen::MatrixXcd w(spec.period, spec.horizon + 1);
  for (int j = 0; j < static_cast<int>(expected); ++j) {
    const auto [n, k] = block_index(j, spec.period);
    w(k, n) = spec.weights[static_cast<std::size_t>(j)];
  }
  return w;
}

PeriodicSpec unblock(const Eigen::MatrixXcd& weights) {
  if (weights.rows() < 1 || weights.cols() < 1) throw Error(ErrorCode::ShapeMismatch, "empty weight matrix");
  PeriodicSpec spec;
  spec.period = static_cast<int>(weights.rows());
  spec.horizon = static_cast<int>(weights.cols()) - 1;
  spec.weights.resize(static_cast<std::size_t>(weights.size()));
  for (int n = 0; n <= spec.horizon; ++n)
    for (int k = 0; k < spec.period; ++k)
      spec.weights[static_cast<std::size_t>(flat_index(n, k, spec.period))] = weights(k, n);
  return spec;
}

ProblemSpec block_problem(const PeriodicSpec& spec, const SpectralDensity& f, double alpha, const AngleGrid& grid,
                          const SolverOptions& options) {
  ProblemSpec p;
  p.alpha = alpha;
  p.weights = block_weights(spec);
  p.f = f;
  p.grid = grid;
  p.options = options;
  if (f.dim() != spec.period)
    throw Error(ErrorCode::ShapeMismatch, "blocked density must be " + std::to_string(spec.period) + "x" +
                                              std::to_string(spec.period) + ", got dimension " +
                                              std::to_string(f.dim()));
  p.validate();
  return p;
}

NoisyProblemSpec block_noisy_problem(const PeriodicSpec& spec, const SpectralDensity& f, const SpectralDensity& g,
                                     double alpha, const AngleGrid& grid, const SolverOptions& options) {
  NoisyProblemSpec p;
  static_cast<ProblemSpec&>(p) = block_problem(spec, f, alpha, grid, options);
  if (g.dim() != spec.period) throw Error(ErrorCode::ShapeMismatch, "blocked noise density has wrong dimension");
  p.g = g;
  return p;
}

}  // namespace stabint
