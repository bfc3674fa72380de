// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "stabint/problem.hpp"

namespace stabint {

/// Scalar functional sum_j a(j) xi(j), j = 0..T(N+1)-1, of a period-T sequence.
struct PeriodicSpec {
  int period = 1;
  int horizon = 0;
  std::vector<std::complex<double>> weights;

  bool operator==(const PeriodicSpec&) const = default;
};

/// j -> (block n, component k) with j = nT + k.
std::pair<int, int> block_index(int j, int period);
int flat_index(int block, int component, int period);

/// T x (N+1) weight matrix; column n holds a(nT..nT+T-1).
Eigen::MatrixXcd block_weights(const PeriodicSpec& spec);
PeriodicSpec unblock(const Eigen::MatrixXcd& weights);

ProblemSpec block_problem(const PeriodicSpec& spec, const SpectralDensity& f, double alpha,
                          const AngleGrid& grid = AngleGrid(), const SolverOptions& options = {});
NoisyProblemSpec block_noisy_problem(const PeriodicSpec& spec, const SpectralDensity& f, const SpectralDensity& g,
                                     double alpha, const AngleGrid& grid = AngleGrid(),
                                     const SolverOptions& options = {});

}  // namespace stabint
