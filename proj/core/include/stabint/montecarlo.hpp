// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "stabint/density.hpp"

namespace stabint {

struct SimConfig {
  double alpha = 2.0;
  SpectralDensity f;
  std::optional<SpectralDensity> g;
  std::size_t grid_size = 256;
  std::size_t replicates = 1000;
  int lo = -16;  // observed index range lo..hi
  int hi = 16;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Paths xi(j) (signal) and eta(j) (noise, zero without g); layout [replicate][j - lo][component].
struct SamplePaths {
  int lo = 0;
  int hi = 0;
  int dim = 1;
  std::size_t replicates = 0;
  bool has_noise = false;
  std::vector<std::complex<double>> signal;
  std::vector<std::complex<double>> noise;

  std::size_t length() const noexcept { return static_cast<std::size_t>(hi - lo + 1); }
  std::size_t offset(std::size_t r, int j, int k) const noexcept {
    return (r * length() + static_cast<std::size_t>(j - lo)) * static_cast<std::size_t>(dim) +
           static_cast<std::size_t>(k);
  }
  std::complex<double> xi(std::size_t r, int j, int k = 0) const { return signal[offset(r, j, k)]; }
  std::complex<double> observed(std::size_t r, int j, int k = 0) const {
    return has_noise ? signal[offset(r, j, k)] + noise[offset(r, j, k)] : signal[offset(r, j, k)];
  }
};

/// Positive (a)-stable variate, 0 < a < 1, with Laplace transform exp(-s^a).
double sample_positive_stable(double a, std::mt19937_64& rng);

/// Isotropic complex S(alpha)S variate with E exp(i Re(conj(t) Z)) = exp(-(sigma |t| / 2)^alpha).
/// At alpha = 2 this is circular complex Gaussian with E|Z|^2 = sigma^2.
std::complex<double> sample_isotropic_stable(double alpha, double sigma, std::mt19937_64& rng);

/// xi(n) = sum_m e^{i n theta_m} dZ_m on a grid of config.grid_size cells; the cell increment is
/// sub-Gaussian with shared mixing variable and matrix scale (f(theta_m) dtheta)^{1/alpha}.
SamplePaths simulate_paths(const SimConfig& config);

struct EstimatorStats {
  double mse = 0.0;
  double mse_stderr = 0.0;
  double median_abs = 0.0;
  double q90_abs = 0.0;
  std::vector<double> abs_errors;
};

struct ComparisonReport {
  EstimatorStats optimal;
  EstimatorStats perturbed;
  std::optional<double> predicted;
  double z_score = 0.0;  // (optimal mse - predicted) / stderr
  double fraction_optimal_smaller = 0.0;
  bool identical = false;
};

/// Realized errors A xi - sum_{j outside 0..N} h_j^T (xi + eta)(j) for two characteristics.
ComparisonReport empirical_compare(const SamplePaths& paths, const std::vector<TrigPolynomial>& h_opt,
                                   const std::vector<TrigPolynomial>& h_perturbed, const Eigen::MatrixXcd& weights,
                                   std::optional<double> predicted = std::nullopt);

}  // namespace stabint
