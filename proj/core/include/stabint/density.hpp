// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "stabint/angle_grid.hpp"
#include "stabint/trig_polynomial.hpp"

namespace stabint {

struct ConstantDensity {
  double level = 0.0;
};

/// |base(theta)|^exponent
struct PowTrigMagnitude {
  TrigPolynomial base;
  double exponent = 1.0;
};

/// scale / (2 pi |1 - pole e^{i theta}|^2)
struct RationalAR {
  double scale = 1.0;
  double pole = 0.0;
};

/// Tabulated values with periodic linear interpolation between angles.
struct SampledDensity {
  std::vector<double> angles;
  std::vector<double> values;
};

using ScalarDensity = std::variant<ConstantDensity, PowTrigMagnitude, RationalAR, SampledDensity>;

double evaluate(const ScalarDensity& density, double theta);

/// Matrix term weight * s(theta) with weight Hermitian PSD.
struct DensityTerm {
  Eigen::MatrixXcd weight;
  ScalarDensity shape;
};

class DensityField;

/// Scalar or T x T Hermitian PSD spectral density on [-pi, pi).
class SpectralDensity {
 public:
  SpectralDensity();  // scalar zero
  SpectralDensity(ScalarDensity scalar);  // NOLINT(google-explicit-constructor)
  template <typename Shape>
    requires std::is_constructible_v<ScalarDensity, Shape> && (!std::is_same_v<std::decay_t<Shape>, ScalarDensity>)
  SpectralDensity(Shape shape)  // NOLINT(google-explicit-constructor)
      : SpectralDensity(ScalarDensity(std::move(shape))) {}

  static SpectralDensity constant(double level);
  static SpectralDensity structured(int dim, std::vector<DensityTerm> terms);
  static SpectralDensity sampled_matrix(std::vector<double> angles, std::vector<Eigen::MatrixXcd> values);

  int dim() const noexcept { return dim_; }
  bool is_scalar() const noexcept { return dim_ == 1 && terms_.size() == 1 && samples_.empty(); }
  const ScalarDensity& scalar_shape() const;

  Eigen::MatrixXcd at(double theta) const;
  DensityField eval(const AngleGrid& grid) const;

  /// Returns a density with every value multiplied by s >= 0.
  SpectralDensity scaled(double s) const;

 private:
  int dim_ = 1;
  std::vector<DensityTerm> terms_;
  std::vector<double> sample_angles_;
  std::vector<Eigen::MatrixXcd> samples_;
};

/// Density values on a grid; one T x T matrix per node, column-major.
class DensityField {
 public:
  DensityField(int dim, AngleGrid grid, std::vector<std::complex<double>> data);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return grid_.size(); }
  const AngleGrid& grid() const noexcept { return grid_; }

  Eigen::Map<const Eigen::MatrixXcd> at(std::size_t m) const;
  double scalar(std::size_t m) const { return data_[m].real(); }
  std::vector<double> scalar_values() const;

  /// Smallest and largest eigenvalue over all nodes.
  std::pair<double, double> eigen_range() const;

  /// Throws InvalidArgument unless every node is Hermitian PSD to tolerance.
  void check_hermitian_psd() const;

 private:
  int dim_;
  AngleGrid grid_;
  std::vector<std::complex<double>> data_;
};

/// Fourier coefficients of f^{-p} (scalar f), k = -K..K, with an aliasing check by grid doubling.
TrigPolynomial neg_power_coeffs(const SpectralDensity& f, double p, int K, const AngleGrid& grid,
                                double alias_tol = 1e-10);

/// Throws DensityVanishes if the smallest eigenvalue falls below floor * largest.
void require_positive(const DensityField& field, double floor = 1e-12);

struct MinimalityReport {
  bool finite = true;
  double value = 0.0;
  std::vector<double> sequence;  // integral per refinement level
};

/// Integral of Tr[(f+g)^{-1/(alpha-1)}] under successive grid refinement.
MinimalityReport check_minimality(const SpectralDensity& f, const SpectralDensity* g, double alpha,
                                  const AngleGrid& grid);

/// Hermitian matrix power via eigendecomposition; eigenvalues clipped at zero.
Eigen::MatrixXcd hermitian_power(const Eigen::MatrixXcd& m, double p);

}  // namespace stabint
