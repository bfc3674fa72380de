// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "stabint/error.hpp"
#include "stabint/problem.hpp"

namespace stabint {

struct D0Class {
  double P = 1.0;  // int f = P
};
struct DBetaClass {
  double beta = 2.0;
  double P = 1.0;  // int f^beta = P
};
struct DMMinusClass {
  std::vector<double> moments;  // int f^{-1} cos(m theta) = moments[m]
};
struct DMinusOneClass {
  double P1 = 1.0;
};
using DensityClassSpec = std::variant<D0Class, DBetaClass, DMMinusClass, DMinusOneClass>;

/// Interpolation template without a density; scalar only.
struct MinimaxProblem {
  double alpha = 2.0;
  Eigen::VectorXcd weights;  // a(0..N)
  AngleGrid grid;
  SolverOptions options;
};

struct MinimaxOptions {
  int max_iterations = 500;
  double relaxation = 0.5;
  double tol = 1e-8;
};

struct MinimaxResult {
  std::vector<double> f0;  // values on the grid
  Eigen::VectorXcd c;
  Eigen::VectorXcd h0;  // characteristic on the grid
  TrigPolynomial h0_fourier;
  double delta = 0.0;
  double lagrange_flatness = 0.0;  // sup/inf - 1 of the stationarity quantity
  double flatness_ratio = 1.0;
  double constraint_residual = 0.0;  // relative
  int iterations = 0;
  bool converged = false;
  double exponent = 0.0;  // DBeta shape exponent
  std::vector<double> multipliers;  // DMMinus cosine weights
  std::vector<std::complex<double>> factor;  // DMMinus p or DMinusOne gamma
  TrigPolynomial inverse_density;  // DMinusOne f0^{-1}

  SpectralDensity density(const AngleGrid& grid) const;
};

class NoFixedPointError : public Error {
 public:
  NoFixedPointError(const std::string& what, MinimaxResult partial)
      : Error(ErrorCode::NoFixedPoint, what), partial_(std::move(partial)) {}
  const MinimaxResult& partial() const noexcept { return partial_; }

 private:
  MinimaxResult partial_;
};

/// -alpha / (-alpha - (alpha-1)(beta-1)), the least favorable exponent for D_beta.
double dbeta_exponent(double alpha, double beta);

MinimaxResult least_favorable_D0(const MinimaxProblem& problem, double P, const MinimaxOptions& options = {});
MinimaxResult least_favorable_DBeta(const MinimaxProblem& problem, double beta, double P,
                                    const MinimaxOptions& options = {});
MinimaxResult least_favorable_DMMinus(const MinimaxProblem& problem, const std::vector<double>& moments,
                                      const MinimaxOptions& options = {});
MinimaxResult least_favorable_DMinusOne(const MinimaxProblem& problem, double P1);
MinimaxResult least_favorable(const MinimaxProblem& problem, const DensityClassSpec& cls,
                              const MinimaxOptions& options = {});

/// Noiseless error of a fixed characteristic h under density values f on the grid.
double characteristic_error(const MinimaxProblem& problem, const Eigen::VectorXcd& h, const std::vector<double>& f);

struct SaddleReport {
  double flatness_ratio = 1.0;
  double delta0 = 0.0;
  double max_probe_delta = 0.0;
  int probes = 0;
  int violations = 0;
  bool finite = true;
  double worst_excess = 0.0;
};

/// Stationarity on the grid plus mixture-perturbation probes inside the class.
SaddleReport verify_saddle(const MinimaxProblem& problem, const MinimaxResult& result, const DensityClassSpec& cls,
                           int probes = 32, std::uint64_t seed = 7, double tol = 1e-6);

}  // namespace stabint
