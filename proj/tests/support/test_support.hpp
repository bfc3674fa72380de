// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stabint/stabint.hpp"

namespace stabint::testsupport {

inline Eigen::MatrixXcd row(std::initializer_list<Complex> v) {
  Eigen::MatrixXcd m(1, static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const auto& z : v) m(0, i++) = z;
  return m;
}

inline Complex random_complex(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng)};
}

/// |q(theta)|^2 times a level, q = 1 + sum_{k=1}^{degree} u_k e^{ik theta} with sum |u_k| <= 0.7;
/// a trigonometric polynomial of the given degree bounded away from zero.
inline SpectralDensity random_trig_density(std::mt19937_64& rng, int degree, double level = 1.0) {
  std::vector<Complex> q(static_cast<std::size_t>(degree + 1));
  q[0] = 1.0;
  double mass = 0.0;
  for (int k = 1; k <= degree; ++k) {
    q[static_cast<std::size_t>(k)] = random_complex(rng, 0.4);
    mass += std::abs(q[static_cast<std::size_t>(k)]);
  }
  if (mass > 0.7)
    for (int k = 1; k <= degree; ++k) q[static_cast<std::size_t>(k)] *= 0.7 / mass;
  return PowTrigMagnitude{TrigPolynomial(0, q).scaled(std::sqrt(level)), 2.0};
}

/// T x T Hermitian positive definite field: W1 p1 + W2 p2 with W1 positive definite.
inline SpectralDensity random_matrix_density(std::mt19937_64& rng, int T, int degree) {
  if (T == 1) return random_trig_density(rng, degree);
  Eigen::MatrixXcd L(T, T), v(T, 1);
  for (int i = 0; i < T; ++i) {
    v(i, 0) = random_complex(rng, 0.5);
    for (int j = 0; j < T; ++j) L(i, j) = random_complex(rng, 0.4);
  }
  const Eigen::MatrixXcd W1 = L * L.adjoint() + 0.5 * Eigen::MatrixXcd::Identity(T, T);
  const Eigen::MatrixXcd W2 = v * v.adjoint();
  const auto s1 = random_trig_density(rng, degree);
  const auto s2 = random_trig_density(rng, degree);
  return SpectralDensity::structured(T, {{W1, s1.scalar_shape()}, {W2, s2.scalar_shape()}});
}

inline Eigen::MatrixXcd random_weights(std::mt19937_64& rng, int T, int N) {
  Eigen::MatrixXcd a(T, N + 1);
  for (int i = 0; i < T; ++i)
    for (int j = 0; j <= N; ++j) a(i, j) = random_complex(rng);
  return a;
}

inline ProblemSpec make_problem(double alpha, Eigen::MatrixXcd weights, SpectralDensity f,
                                std::size_t grid = kDefaultGridSize) {
  ProblemSpec p;
  p.alpha = alpha;
  p.weights = std::move(weights);
  p.f = std::move(f);
  p.grid = AngleGrid(grid);
  return p;
}

/// |e^{i theta} + 0.5|^{exponent}
inline SpectralDensity ar1_density(double exponent) {
  return PowTrigMagnitude{TrigPolynomial(0, {0.5, 1.0}), exponent};
}

inline bool close(Complex lhs, Complex rhs, double rel = 1e-12, double abs_floor = 1e-14) {
  const double d = std::abs(lhs - rhs);
  return std::isfinite(d) && d <= rel * std::max(std::abs(lhs), std::abs(rhs)) + abs_floor;
}

// ---------------------------------------------------------------------------------------------
// Signed-power identity catalog.

struct IdentityInputs {
  Complex x, y, z;
  double a = 1.0, b = 1.0, c = 1.0;
};

struct Identity {
  std::string name;
  std::string statement;
  bool erratum = false;  // listed form known to fail; a corrected companion follows it
  std::function<std::pair<Complex, Complex>(const IdentityInputs&)> sides;
  std::vector<IdentityInputs> fixed_probes;
};

struct IdentityResult {
  std::string name;
  std::string statement;
  bool erratum = false;
  bool holds = true;
  int trials = 0;
  double max_rel_error = 0.0;
  std::string counterexample;
};

/// |z|^{e-1} conj(z) for any real e (spow itself requires e > 0).
inline Complex signed_power_any(Complex z, double e) {
  const double r = std::abs(z);
  return r == 0.0 ? Complex(0.0, 0.0) : std::pow(r, e - 1.0) * std::conj(z);
}

inline std::vector<Identity> spow_identities() {
  using P = std::pair<Complex, Complex>;
  std::vector<Identity> ids;
  ids.push_back({"modulus_via_lower_power", "spow(|z|, b) = z spow(z, b-1), b > 1", false,
                 [](const IdentityInputs& in) {
                   const double b = 1.0 + in.b;
                   return P{spow(Complex(std::abs(in.z), 0.0), Exponent(b)), in.z * spow(in.z, Exponent(b - 1.0))};
                 },
                 {}});
  ids.push_back({"modulus_real", "|spow(|z|, b)| = spow(|z|, b)", false,
                 [](const IdentityInputs& in) {
                   const Complex v = spow(Complex(std::abs(in.z), 0.0), Exponent(in.b));
                   return P{std::abs(v), v};
                 },
                 {}});
  ids.push_back({"inverse", "spow(z, b) = v implies z = |v|^{(1-b)/b} conj(v)", false,
                 [](const IdentityInputs& in) {
                   const Complex v = spow(in.z, Exponent(in.b));
                   return P{in.z, std::pow(std::abs(v), (1.0 - in.b) / in.b) * std::conj(v)};
                 },
                 {}});
  ids.push_back({"inverse_helper", "spow_inv(spow(z, b), b) = z", false,
                 [](const IdentityInputs& in) { return P{spow_inv(spow(in.z, Exponent(in.b)), Exponent(in.b)), in.z}; },
                 {}});
  ids.push_back({"unit_exponent", "spow(z, 1) = conj(z)", false,
                 [](const IdentityInputs& in) { return P{spow(in.z, Exponent(1.0)), std::conj(in.z)}; }, {}});
  ids.push_back({"product_of_powers", "spow(z, a) spow(z, b) = conj(z)/|z| spow(z, a+b), z != 0", false,
                 [](const IdentityInputs& in) {
                   return P{spow(in.z, Exponent(in.a)) * spow(in.z, Exponent(in.b)),
                            std::conj(in.z) / std::abs(in.z) * spow(in.z, Exponent(in.a + in.b))};
                 },
                 {}});
  ids.push_back({"quotient_of_powers", "spow(z, a) / spow(z, b) = z/|z| spow(z, a-b), z != 0", false,
                 [](const IdentityInputs& in) {
                   return P{spow(in.z, Exponent(in.a)) / spow(in.z, Exponent(in.b)),
                            in.z / std::abs(in.z) * signed_power_any(in.z, in.a - in.b)};
                 },
                 {}});
  ids.push_back({"real_scaling_as_listed", "spow(c z, a) = c^a spow(z, a) for every real c", true,
                 [](const IdentityInputs& in) {
                   return P{spow(in.c * in.z, Exponent(in.a)), std::pow(in.c, in.a) * spow(in.z, Exponent(in.a))};
                 },
                 {IdentityInputs{{0, 0}, {0, 0}, {1.0, 0.0}, 2.0, 1.0, -1.0}}});
  ids.push_back({"real_scaling", "spow(c z, a) = sign(c) |c|^a spow(z, a) for real c", false,
                 [](const IdentityInputs& in) {
                   const double s = in.c < 0.0 ? -1.0 : 1.0;
                   return P{spow(in.c * in.z, Exponent(in.a)), s * std::pow(std::abs(in.c), in.a) * spow(in.z, Exponent(in.a))};
                 },
                 {IdentityInputs{{0, 0}, {0, 0}, {1.0, 0.0}, 2.0, 1.0, -1.0}}});
  ids.push_back({"nested", "spow(spow(z, a), b) = spow(conj(z), a b)", false,
                 [](const IdentityInputs& in) {
                   return P{spow(spow(in.z, Exponent(in.a)), Exponent(in.b)), spow(std::conj(in.z), Exponent(in.a * in.b))};
                 },
                 {}});
  ids.push_back({"multiplicative", "spow(x y, a) = spow(x, a) spow(y, a)", false,
                 [](const IdentityInputs& in) {
                   return P{spow(in.x * in.y, Exponent(in.a)), spow(in.x, Exponent(in.a)) * spow(in.y, Exponent(in.a))};
                 },
                 {}});
  ids.push_back({"power_then_signed", "spow(z^a, b) = spow(z, b)^a (principal branch)", false,
                 [](const IdentityInputs& in) {
                   return P{spow(std::pow(in.z, in.a), Exponent(in.b)), std::pow(spow(in.z, Exponent(in.b)), in.a)};
                 },
                 {}});
  ids.push_back({"signed_then_power", "spow(z, a)^b = spow(z^b, a) (principal branch)", false,
                 [](const IdentityInputs& in) {
                   return P{std::pow(spow(in.z, Exponent(in.a)), in.b), spow(std::pow(in.z, in.b), Exponent(in.a))};
                 },
                 {}});
  ids.push_back({"modulus_power", "|spow(z, a)|^b = |z|^{a b}", false,
                 [](const IdentityInputs& in) {
                   return P{std::pow(std::abs(spow(in.z, Exponent(in.a))), in.b), std::pow(std::abs(in.z), in.a * in.b)};
                 },
                 {}});
  ids.push_back({"sum", "spow(x + y, a) = conj(x) |x+y|^{a-1} + conj(y) |x+y|^{a-1}", false,
                 [](const IdentityInputs& in) {
                   const double m = std::pow(std::abs(in.x + in.y), in.a - 1.0);
                   return P{spow(in.x + in.y, Exponent(in.a)), std::conj(in.x) * m + std::conj(in.y) * m};
                 },
                 {}});
  return ids;
}

/// Runs every identity on fixed probes and then `trials` random inputs (|z| log-uniform in
/// [1e-2, 1e2], exponents in [0.1, 3], c uniform in [-3, 3]).
inline std::vector<IdentityResult> run_spow_identities(int trials, std::uint64_t seed) {
  std::vector<IdentityResult> out;
  for (const auto& id : spow_identities()) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logr(std::log(1e-2), std::log(1e2));
    std::uniform_real_distribution<double> phase(-3.141592653589793, 3.141592653589793);
    std::uniform_real_distribution<double> expo(0.1, 3.0);
    std::uniform_real_distribution<double> real(-3.0, 3.0);
    auto draw = [&]() { return std::polar(std::exp(logr(rng)), phase(rng)); };
    IdentityResult res{id.name, id.statement, id.erratum};
    auto check = [&](const IdentityInputs& in) {
      const auto [lhs, rhs] = id.sides(in);
      ++res.trials;
      const double scale = std::max(std::abs(lhs), std::abs(rhs));
      const double rel = std::abs(lhs - rhs) / std::max(scale, 1e-300);
      if (std::isfinite(rel)) res.max_rel_error = std::max(res.max_rel_error, rel);
      if (!close(lhs, rhs) && res.holds) {
        res.holds = false;
        std::ostringstream os;
        os.precision(6);
        os << "x=" << in.x << " y=" << in.y << " z=" << in.z << " a=" << in.a << " b=" << in.b << " c=" << in.c
           << ": lhs=" << lhs << " rhs=" << rhs;
        res.counterexample = os.str();
      }
    };
    for (const auto& probe : id.fixed_probes) check(probe);
    for (int t = 0; t < trials; ++t) {
      IdentityInputs in;
      in.x = draw();
      in.y = draw();
      in.z = draw();
      in.a = expo(rng);
      in.b = expo(rng);
      in.c = real(rng);
      check(in);
    }
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace stabint::testsupport
