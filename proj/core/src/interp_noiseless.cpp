// SPDX-License-Identifier: Apache-2.0
#include "stabint/interp_noiseless.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "detail.hpp"
#include "stabint/spow.hpp"

namespace stabint {

using detail::Complex;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class NoiselessKernel {
 public:
  explicit NoiselessKernel(const ProblemSpec& problem, std::optional<double> alpha_override = std::nullopt)
      : T_(problem.dim()),
        N_(problem.horizon()),
        M_(problem.grid.size()),
        alpha_(alpha_override.value_or(problem.alpha)),
        p_(1.0 / (alpha_ - 1.0)),
        weights_(problem.weights),
        field_(problem.f.eval(problem.grid)) {
    require_positive(field_, problem.options.positivity_floor);
    const auto TT = static_cast<std::size_t>(T_ * T_);
    finv_.resize(M_ * TT);
    for (std::size_t m = 0; m < M_; ++m) {
      if (T_ == 1) {
        finv_[m] = 1.0 / field_.scalar(m);
        continue;
      }
      const Eigen::MatrixXcd inv = Eigen::MatrixXcd(field_.at(m)).ldlt().solve(Eigen::MatrixXcd::Identity(T_, T_));
      std::copy(inv.data(), inv.data() + TT, finv_.begin() + static_cast<std::ptrdiff_t>(m * TT));
    }
    phase_ = problem.grid.phase_table(0, N_);
    const Eigen::MatrixXcd A = weights_on_grid(weights_, problem.grid, +1);
    A_.resize(M_ * static_cast<std::size_t>(T_));
    for (std::size_t m = 0; m < M_; ++m)
      for (int t = 0; t < T_; ++t) A_[m * T_ + t] = A(static_cast<Eigen::Index>(m), t);
  }

  int dim() const { return T_; }
  int horizon() const { return N_; }
  std::size_t size() const { return M_; }
  double alpha() const { return alpha_; }
  const DensityField& field() const { return field_; }

  /// C on the grid and v = spow(f^{-1} C, 1/(alpha-1)), both laid out m * T + t.
  void evaluate(const Eigen::MatrixXcd& c, std::vector<Complex>& C, std::vector<Complex>& v) const {
    C.assign(M_ * static_cast<std::size_t>(T_), Complex(0.0, 0.0));
    v.resize(C.size());
    const Exponent p(p_);
    for (std::size_t m = 0; m < M_; ++m) {
      Complex* Cm = C.data() + m * T_;
      for (int j = 0; j <= N_; ++j) {
        const Complex e = phase_[static_cast<std::size_t>(j) * M_ + m];
        for (int t = 0; t < T_; ++t) Cm[t] += c(t, j) * e;
      }
      const Complex* Fi = finv_.data() + m * static_cast<std::size_t>(T_ * T_);
      for (int r = 0; r < T_; ++r) {
        Complex y(0.0, 0.0);
        for (int s = 0; s < T_; ++s) y += Fi[s * T_ + r] * Cm[s];
        v[m * T_ + r] = spow(y, p);
      }
    }
  }

  Eigen::MatrixXcd residual_from(const std::vector<Complex>& v) const {
    Eigen::MatrixXcd R(T_, N_ + 1);
    for (int k = 0; k <= N_; ++k)
      for (int t = 0; t < T_; ++t) {
        Complex acc(0.0, 0.0);
        const Complex* ph = phase_.data() + static_cast<std::size_t>(k) * M_;
        for (std::size_t m = 0; m < M_; ++m) acc += ph[m] * v[m * T_ + t];
        R(t, k) = kTwoPi * weights_(t, k) - kTwoPi * acc / static_cast<double>(M_);
      }
    return R;
  }

  Eigen::MatrixXcd residual(const Eigen::MatrixXcd& c) const {
    std::vector<Complex> C, v;
    evaluate(c, C, v);
    return residual_from(v);
  }

  /// A - h on the grid, M x T.
  Eigen::MatrixXcd error_characteristic(const Eigen::MatrixXcd& c) const {
    std::vector<Complex> C, v;
    evaluate(c, C, v);
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(M_), T_);
    for (std::size_t m = 0; m < M_; ++m)
      for (int t = 0; t < T_; ++t) e(static_cast<Eigen::Index>(m), t) = v[m * T_ + t];
    return e;
  }

  Eigen::MatrixXcd characteristic_from(const Eigen::MatrixXcd& e) const {
    Eigen::MatrixXcd h(e.rows(), e.cols());
    for (std::size_t m = 0; m < M_; ++m)
      for (int t = 0; t < T_; ++t)
        h(static_cast<Eigen::Index>(m), t) = A_[m * T_ + t] - e(static_cast<Eigen::Index>(m), t);
    return h;
  }

  Eigen::MatrixXcd characteristic(const Eigen::MatrixXcd& c) const { return characteristic_from(error_characteristic(c)); }

  /// Size of the residual's rounding error: eps * sqrt(M) * (2 pi / M) sum |v|.
  double rounding_floor(const Eigen::MatrixXcd& c) const {
    std::vector<Complex> C, v;
    evaluate(c, C, v);
    double acc = 0.0;
    for (const auto& x : v) acc += std::abs(x);
    return 64.0 * std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(M_)) * kTwoPi * acc /
           static_cast<double>(M_);
  }

  double error(const Eigen::MatrixXcd& c) const {
    std::vector<Complex> C, v;
    evaluate(c, C, v);
    // v^T f spow(v, alpha-1) = v^T C by the defining relation.
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += (v[i] * C[i]).real();
    return kTwoPi * acc / static_cast<double>(M_);
  }

 private:
  int T_;
  int N_;
  std::size_t M_;
  double alpha_;
  double p_;
  Eigen::MatrixXcd weights_;
  DensityField field_;
  std::vector<Complex> finv_;
  std::vector<Complex> phase_;
  std::vector<Complex> A_;
};

/// alpha = 2 coefficients for the density field raised to a power: solves B x = a with B from [phi^{-1}]^T.
Eigen::MatrixXcd gaussian_coefficients(const std::vector<Eigen::MatrixXcd>& phi_inv_T, const AngleGrid& grid,
                                       const Eigen::MatrixXcd& weights, double cond_limit, double* condition) {
  const int N = static_cast<int>(weights.cols()) - 1;
  const int T = static_cast<int>(weights.rows());
  const auto coeffs = detail::matrix_fourier(phi_inv_T, grid, N);
  const Eigen::MatrixXcd B = detail::block_toeplitz(coeffs, N);
  const double cond = detail::condition_number(B);
  if (condition != nullptr) *condition = cond;
  if (!(cond <= cond_limit)) {
    throw Error(ErrorCode::SingularSystem, "block Toeplitz system has condition " + format_value(cond));
  }
  const Eigen::VectorXcd x = B.fullPivLu().solve(detail::stack(weights));
  return detail::unstack(x, T).conjugate();
}

/// Start for alpha < 2: exact alpha = 2 solution for f^{1/(alpha-1)}, mapped back through the signed power.
Eigen::MatrixXcd initial_guess(const ProblemSpec& problem, const DensityField& field, double alpha) {
  const int T = problem.dim();
  const int N = problem.horizon();
  const double p = 1.0 / (alpha - 1.0);
  const AngleGrid& grid = problem.grid;
  std::vector<Eigen::MatrixXcd> inv_T;
  inv_T.reserve(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) inv_T.push_back(hermitian_power(field.at(m), -p).transpose());
  const Eigen::MatrixXcd d = gaussian_coefficients(inv_T, grid, problem.weights, 1e300, nullptr);
  if (alpha == 2.0) return d;
  const Exponent back(alpha - 1.0);
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(T, N + 1);
  for (std::size_t m = 0; m < grid.size(); ++m) {
    Eigen::VectorXcd D = Eigen::VectorXcd::Zero(T);
    for (int j = 0; j <= N; ++j) D += d.col(j) * grid.phase(j, m);
    // f^{-1} C ~ spow(conj(f^{-p} D), alpha - 1)
    Eigen::VectorXcd y = inv_T[m] * D.conjugate();
    for (Eigen::Index t = 0; t < T; ++t) y(t) = spow(y(t), back);
    const Eigen::VectorXcd C = field.at(m) * y;
    for (int j = 0; j <= N; ++j) c.col(j) += C * std::conj(grid.phase(j, m));
  }
  return c / static_cast<double>(grid.size());
}

Solution finish(const ProblemSpec& problem, const NoiselessKernel& kernel, const Eigen::MatrixXcd& c,
                Diagnostics diag) {
  Solution s;
  s.c = c;
  s.error_grid = kernel.error_characteristic(c);
  s.h_grid = kernel.characteristic_from(s.error_grid);
  s.h_fourier = fourier_window(s.h_grid, problem.grid, problem.options.fourier_window);
  s.error = std::max(0.0, kernel.error(c));
  diag.residual_norm = kernel.residual(c).norm();
  s.diagnostics = std::move(diag);
  return s;
}

NewtonResult run_newton(const NoiselessKernel& kernel, const ProblemSpec& problem, const Eigen::MatrixXcd& c0) {
  const int T = problem.dim();
  const int cols = problem.horizon() + 1;
  auto F = [&](const Eigen::VectorXd& x) { return pack(kernel.residual(unpack(x, T, cols))); };
  NewtonResult r = damped_newton(F, pack(c0), newton_options(problem));
  if ((r.status == NewtonStatus::Stalled || r.status == NewtonStatus::MaxIterations) &&
      r.residual_norm <= kernel.rounding_floor(unpack(r.x, T, cols)))
    r.status = NewtonStatus::Converged;
  return r;
}

std::string describe(const NewtonResult& r) {
  switch (r.status) {
    case NewtonStatus::Converged: return "converged";
    case NewtonStatus::MaxIterations: return "iteration limit reached";
    case NewtonStatus::Singular: return "Jacobian condition " + format_value(r.condition);
    case NewtonStatus::Stalled: return "line search stalled";
    case NewtonStatus::NonFinite: return "non-finite residual";
  }
  return "unknown";
}

}  // namespace

Eigen::MatrixXcd residual(const ProblemSpec& problem, const Eigen::MatrixXcd& c) {
  problem.validate();
  if (c.rows() != problem.dim() || c.cols() != problem.horizon() + 1)
    throw Error(ErrorCode::ShapeMismatch, "coefficients must be T x (N+1)");
  return NoiselessKernel(problem).residual(c);
}

Eigen::MatrixXcd characteristic(const ProblemSpec& problem, const Eigen::MatrixXcd& c) {
  problem.validate();
  return NoiselessKernel(problem).characteristic(c);
}

double error_norm(const ProblemSpec& problem, const Eigen::MatrixXcd& c) {
  problem.validate();
  return std::max(0.0, NoiselessKernel(problem).error(c));
}

Solution solve_coefficients(const ProblemSpec& problem, const Eigen::MatrixXcd* warm) {
  problem.validate();
  const NoiselessKernel kernel(problem);
  const int T = problem.dim();
  const int cols = problem.horizon() + 1;
  Diagnostics diag;
  diag.method = "newton";
  if (problem.weights.norm() == 0.0) {
    diag.converged = true;
    return finish(problem, kernel, Eigen::MatrixXcd::Zero(T, cols), diag);
  }

  if (warm != nullptr && warm->rows() == T && warm->cols() == cols && warm->allFinite()) {
    const NewtonResult wr = run_newton(kernel, problem, *warm);
    if (wr.status == NewtonStatus::Converged) {
      diag.method = "warm";
      diag.converged = true;
      diag.iterations = wr.iterations;
      return finish(problem, kernel, unpack(wr.x, T, cols), diag);
    }
  }

  const Eigen::MatrixXcd c0 = initial_guess(problem, kernel.field(), problem.alpha);
  NewtonResult r = run_newton(kernel, problem, c0);
  int total = r.iterations;
  NewtonResult last = r;

  if (r.status != NewtonStatus::Converged && problem.options.continuation && problem.alpha < 2.0) {
    // Homotopy in alpha from the linear case.
    Eigen::MatrixXcd c = initial_guess(problem, kernel.field(), 2.0);
    bool ok = true;
    for (double a = 2.0; ok;) {
      const NoiselessKernel step_kernel(problem, a);
      NewtonResult sr = run_newton(step_kernel, problem, c);
      total += sr.iterations;
      ok = sr.status == NewtonStatus::Converged;
      if (ok) c = unpack(sr.x, T, cols);
      if (a == problem.alpha) {
        last = sr;
        break;
      }
      a = std::max(problem.alpha, a - 0.1);
    }
    diag.method = "continuation";
    r = last;
  }

  std::mt19937_64 rng(problem.options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  int starts = 1;
  for (; r.status != NewtonStatus::Converged && starts <= problem.options.multistart; ++starts) {
    Eigen::MatrixXcd c = c0;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      c.data()[i] *= 1.0 + 0.5 * normal(rng);
      c.data()[i] += 0.1 * c0.norm() * Complex(normal(rng), normal(rng)) / std::sqrt(2.0 * c.size());
    }
    r = run_newton(kernel, problem, c);
    total += r.iterations;
    diag.method = "multistart";
  }

  if (r.status != NewtonStatus::Converged) {
    const ErrorCode code = r.status == NewtonStatus::Singular ? ErrorCode::SingularJacobian : ErrorCode::NoConvergence;
    throw Error(code, describe(r) + "; final residual " + format_value(r.residual_norm));
  }
  diag.converged = true;
  diag.iterations = total;
  diag.starts = starts;
  return finish(problem, kernel, unpack(r.x, T, cols), diag);
}

Complex single_point_closed_form(Complex a, const SpectralDensity& f, double alpha, const AngleGrid& grid) {
  if (f.dim() != 1) throw Error(ErrorCode::ShapeMismatch, "closed form needs a scalar density");
  if (!(alpha > 1.0 && alpha <= 2.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (1, 2]");
  const DensityField field = f.eval(grid);
  require_positive(field);
  double integral = 0.0;
  for (std::size_t m = 0; m < field.size(); ++m) integral += std::pow(field.scalar(m), -1.0 / (alpha - 1.0));
  integral *= grid.spacing();
  const Exponent e(alpha - 1.0);
  return spow(kTwoPi * a, e) / spow(Complex(integral, 0.0), e);
}

CubicExpansion cubic_signed_power_coeffs(std::span<const Complex> c) {
  const int N = static_cast<int>(c.size()) - 1;
  // |C|^2 = sum_{l,j} c_j conj(c_l) e^{i(l-j) theta}
  TrigPolynomial mod = TrigPolynomial::zero(-N, N);
  for (int j = 0; j <= N; ++j)
    for (int l = 0; l <= N; ++l) mod[l - j] += c[static_cast<std::size_t>(j)] * std::conj(c[static_cast<std::size_t>(l)]);
  // spow(C, 3) = |C|^2 conj(C), conj(C) = sum_l conj(c_l) e^{i l theta}
  TrigPolynomial cub = TrigPolynomial::zero(-N, 2 * N);
  for (int n = -N; n <= 2 * N; ++n)
    for (int l = 0; l <= N; ++l) cub[n] += std::conj(c[static_cast<std::size_t>(l)]) * mod.coeff(n - l);
  return {mod, cub};
}

Solution alpha43_expansion(const ProblemSpec& problem) {
  problem.validate();
  if (std::abs(problem.alpha - 4.0 / 3.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "polynomial expansion path requires alpha = 4/3");
  if (problem.dim() != 1) throw Error(ErrorCode::ShapeMismatch, "polynomial expansion path is scalar only");
  const int N = problem.horizon();
  const int K = problem.options.fourier_window;
  const AngleGrid& grid = problem.grid;
  const TrigPolynomial r = neg_power_coeffs(problem.f, 3.0, std::max(2 * N, K + 2 * N), grid);
  const Eigen::VectorXcd a = problem.weights.row(0).transpose();

  auto cubic_of = [&](const Eigen::VectorXcd& c) {
    return cubic_signed_power_coeffs(std::span<const Complex>(c.data(), static_cast<std::size_t>(c.size()))).cubic;
  };
  auto F = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXcd c = unpack(x, N + 1, 1);
    const TrigPolynomial b = cubic_of(c);
    Eigen::MatrixXcd R(1, N + 1);
    for (int k = 0; k <= N; ++k) {
      Complex acc(0.0, 0.0);
      for (int n = b.lo(); n <= b.hi(); ++n) acc += b.coeff(n) * r.coeff(k - n);
      R(0, k) = kTwoPi * (a(k) - acc);
    }
    return pack(R);
  };

  Diagnostics diag;
  diag.method = "cubic-expansion";
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(N + 1);
  if (a.norm() > 0.0) {
    const DensityField field = problem.f.eval(grid);
    require_positive(field, problem.options.positivity_floor);
    const Eigen::MatrixXcd c0 = initial_guess(problem, field, problem.alpha);
    const NewtonResult nr = damped_newton(F, pack(c0.transpose()), newton_options(problem));
    if (nr.status != NewtonStatus::Converged) {
      throw Error(nr.status == NewtonStatus::Singular ? ErrorCode::SingularJacobian : ErrorCode::NoConvergence,
                  "cubic expansion: " + describe(nr));
    }
    c = unpack(nr.x, N + 1, 1);
    diag.iterations = nr.iterations;
    diag.residual_norm = nr.residual_norm;
  }
  diag.converged = true;

  const Solution generic = solve_coefficients(problem);
  const double gap = (generic.c.row(0).transpose() - c).cwiseAbs().maxCoeff();
  if (gap > 1e-6) {
    throw Error(ErrorCode::InconsistentWithGeneric,
                "cubic expansion and generic solver differ by " + format_value(gap));
  }

  const TrigPolynomial b = cubic_of(c);
  const DensityField field = problem.f.eval(grid);
  Solution s;
  s.c = c.transpose();
  s.h_grid.resize(static_cast<Eigen::Index>(grid.size()), 1);
  s.error_grid.resize(static_cast<Eigen::Index>(grid.size()), 1);
  double err = 0.0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double fm = field.scalar(m);
    const Complex v = b(grid.node(m)) / (fm * fm * fm);
    Complex A(0.0, 0.0);
    for (int j = 0; j <= N; ++j) A += a(j) * std::conj(grid.phase(j, m));
    s.h_grid(static_cast<Eigen::Index>(m), 0) = A - v;
    s.error_grid(static_cast<Eigen::Index>(m), 0) = v;
    err += std::pow(std::abs(v), 4.0 / 3.0) * fm;
  }
  s.error = err * grid.spacing();
  TrigPolynomial h = TrigPolynomial::zero(-K, K);
  for (int n = -K; n <= K; ++n) {
    Complex acc = (n >= 0 && n <= N) ? a(n) : Complex(0.0, 0.0);
    for (int l = b.lo(); l <= b.hi(); ++l) acc -= b.coeff(l) * r.coeff(n - l);
    h[n] = acc;
  }
  s.h_fourier = {h};
  s.diagnostics = diag;
  return s;
}

Solution gaussian_special(const ProblemSpec& problem) {
  problem.validate();
  if (problem.alpha != 2.0) throw Error(ErrorCode::InvalidArgument, "linear path requires alpha = 2");
  const NoiselessKernel kernel(problem);
  std::vector<Eigen::MatrixXcd> inv_T;
  inv_T.reserve(problem.grid.size());
  for (std::size_t m = 0; m < problem.grid.size(); ++m)
    inv_T.push_back(Eigen::MatrixXcd(kernel.field().at(m)).inverse().transpose());
  double cond = 0.0;
  const Eigen::MatrixXcd c =
      gaussian_coefficients(inv_T, problem.grid, problem.weights, problem.options.cond_limit, &cond);
  Diagnostics diag;
  diag.method = "block-toeplitz";
  diag.converged = true;
  Solution s = finish(problem, kernel, c, diag);
  // 2 pi <B^{-1} a, a>
  s.error = kTwoPi * detail::stack(problem.weights).dot(detail::stack(c.conjugate())).real();
  return s;
}

double defining_equation_defect(const ProblemSpec& problem, const Solution& s) {
  const DensityField field = problem.f.eval(problem.grid);
  const Eigen::MatrixXcd A = weights_on_grid(problem.weights, problem.grid, +1);
  const Eigen::MatrixXcd C = weights_on_grid(s.c, problem.grid, -1);
  const Exponent q(problem.alpha - 1.0);
  const bool has_error_grid = s.error_grid.rows() == s.h_grid.rows() && s.error_grid.cols() == s.h_grid.cols();
  double scale = 0.0;
  std::vector<double> defects(field.size()), denoms(field.size());
  for (std::size_t m = 0; m < field.size(); ++m) {
    const auto mi = static_cast<Eigen::Index>(m);
    const Eigen::VectorXcd e = has_error_grid ? Eigen::VectorXcd(s.error_grid.row(mi).transpose())
                                              : Eigen::VectorXcd((A.row(mi) - s.h_grid.row(mi)).transpose());
    const Eigen::VectorXcd v = spow_vec(e, q);
    const Eigen::MatrixXcd F = field.at(m);
    const Eigen::VectorXcd lhs = F * v;
    defects[m] = (lhs - C.row(mi).transpose()).norm();
    denoms[m] = F.norm() * v.norm() + C.row(mi).norm();
    scale = std::max(scale, denoms[m]);
  }
  double worst = 0.0;
  for (double d : defects) worst = std::max(worst, d);
  return scale > 0.0 ? worst / scale : worst;
}

double multistart_spread(const ProblemSpec& problem, const Solution& reference, int starts) {
  const NoiselessKernel kernel(problem);
  const int T = problem.dim();
  const int cols = problem.horizon() + 1;
  std::mt19937_64 rng(problem.options.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  double spread = 0.0;
  for (int s = 0; s < starts; ++s) {
    Eigen::MatrixXcd c = reference.c;
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] *= Complex(1.0 + 0.5 * normal(rng), 0.5 * normal(rng));
    const NewtonResult r = run_newton(kernel, problem, c);
    if (r.status == NewtonStatus::Converged)
      spread = std::max(spread, (unpack(r.x, T, cols) - reference.c).cwiseAbs().maxCoeff());
  }
  return spread;
}

}  // namespace stabint
