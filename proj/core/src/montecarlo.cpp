// SPDX-License-Identifier: Apache-2.0
#include "stabint/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "stabint/error.hpp"

namespace stabint {

namespace {

using Complex = std::complex<double>;

/// Per-cell matrices (f dtheta)^{1/alpha}, column-major T x T.
std::vector<Complex> cell_scales(const SpectralDensity& f, const AngleGrid& grid, double alpha) {
  const DensityField field = f.eval(grid);
  field.check_hermitian_psd();
  const int T = f.dim();
  const auto TT = static_cast<std::size_t>(T * T);
  std::vector<Complex> out(grid.size() * TT);
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const Eigen::MatrixXcd L = hermitian_power(Eigen::MatrixXcd(field.at(m)) * grid.spacing(), 1.0 / alpha);
    std::copy(L.data(), L.data() + TT, out.begin() + static_cast<std::ptrdiff_t>(m * TT));
  }
  return out;
}

/// Adds sum_m e^{i j theta_m} L_m sqrt(A_m) G_m into out[(j - lo) * T + k].
void draw_path(double alpha, const std::vector<Complex>& scales, const std::vector<Complex>& phase, int T,
               std::size_t M, std::size_t len, std::mt19937_64& rng, Complex* out, std::vector<Complex>& dz) {
  std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
  dz.assign(M * static_cast<std::size_t>(T), Complex(0.0, 0.0));
  std::vector<Complex> gauss(static_cast<std::size_t>(T));
  const auto TT = static_cast<std::size_t>(T * T);
  for (std::size_t m = 0; m < M; ++m) {
    const double mix = alpha < 2.0 ? std::sqrt(sample_positive_stable(alpha / 2.0, rng)) : 1.0;
    for (int k = 0; k < T; ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      gauss[static_cast<std::size_t>(k)] = Complex(re, im) * mix;
    }
    const Complex* L = scales.data() + m * TT;
    for (int r = 0; r < T; ++r) {
      Complex acc(0.0, 0.0);
      for (int k = 0; k < T; ++k) acc += L[static_cast<std::size_t>(k * T + r)] * gauss[static_cast<std::size_t>(k)];
      dz[m * static_cast<std::size_t>(T) + static_cast<std::size_t>(r)] = acc;
    }
  }
  for (std::size_t j = 0; j < len; ++j) {
    const Complex* ph = phase.data() + j * M;
    for (int k = 0; k < T; ++k) {
      Complex acc(0.0, 0.0);
      for (std::size_t m = 0; m < M; ++m) acc += ph[m] * dz[m * static_cast<std::size_t>(T) + static_cast<std::size_t>(k)];
      out[j * static_cast<std::size_t>(T) + static_cast<std::size_t>(k)] = acc;
    }
  }
}

unsigned worker_count(unsigned requested, std::size_t work) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(work, 1)));
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned n = worker_count(threads, count);
  if (n <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + n - 1) / n;
  for (unsigned t = 0; t < n; ++t) {
    const std::size_t b = t * chunk;
    const std::size_t e = std::min(count, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

EstimatorStats stats_of(std::vector<double> abs_errors) {
  EstimatorStats s;
  const auto R = static_cast<double>(abs_errors.size());
  double sum = 0.0;
  double sum2 = 0.0;
  for (double e : abs_errors) {
    const double sq = e * e;
    sum += sq;
    sum2 += sq * sq;
  }
  s.mse = sum / R;
  const double var = abs_errors.size() > 1 ? std::max(0.0, (sum2 - R * s.mse * s.mse) / (R - 1.0)) : 0.0;
  s.mse_stderr = std::sqrt(var / R);
  std::vector<double> sorted = abs_errors;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double pos = q * (R - 1.0);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const std::size_t i1 = std::min(i + 1, sorted.size() - 1);
    return sorted[i] + (pos - static_cast<double>(i)) * (sorted[i1] - sorted[i]);
  };
  s.median_abs = quantile(0.5);
  s.q90_abs = quantile(0.9);
  s.abs_errors = std::move(abs_errors);
  return s;
}

std::vector<double> realized_errors(const SamplePaths& paths, const std::vector<TrigPolynomial>& h,
                                    const Eigen::MatrixXcd& weights) {
  const int T = paths.dim;
  const int N = static_cast<int>(weights.cols()) - 1;
  if (static_cast<int>(h.size()) != T || weights.rows() != T)
    throw Error(ErrorCode::ShapeMismatch, "characteristic and weights must have one component per path dimension");
  if (paths.lo > 0 || paths.hi < N) throw Error(ErrorCode::InvalidArgument, "paths must cover indices 0..N");
  double hmax = 0.0;
  for (const auto& p : h) hmax = std::max(hmax, p.max_abs_coeff());
  for (const auto& p : h)
    for (int j = p.lo(); j <= p.hi(); ++j)
      if ((j < paths.lo || j > paths.hi) && std::abs(p.coeff(j)) > 1e-12 * hmax)
        throw Error(ErrorCode::InvalidArgument, "characteristic coefficient at index " + std::to_string(j) +
                                                    " lies outside the simulated range");
  std::vector<double> out(paths.replicates);
  for (std::size_t r = 0; r < paths.replicates; ++r) {
    Complex err(0.0, 0.0);
    for (int k = 0; k < T; ++k) {
      for (int j = 0; j <= N; ++j) err += weights(k, j) * paths.xi(r, j, k);
      const TrigPolynomial& p = h[static_cast<std::size_t>(k)];
      for (int j = std::max(p.lo(), paths.lo); j <= std::min(p.hi(), paths.hi); ++j) {
        if (j >= 0 && j <= N) continue;
        err -= p.coeff(j) * paths.observed(r, j, k);
      }
    }
    out[r] = std::abs(err);
  }
  return out;
}

}  // namespace

double sample_positive_stable(double a, std::mt19937_64& rng) {
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::InvalidArgument, "positive stable index must lie in (0, 1)");
  // Kanter's representation.
  std::uniform_real_distribution<double> uni(0.0, std::numbers::pi);
  std::exponential_distribution<double> expo(1.0);
  double u = uni(rng);
  while (u == 0.0) u = uni(rng);
  const double e = expo(rng);
  const double left = std::sin(a * u) / std::pow(std::sin(u), 1.0 / a);
  const double right = std::pow(std::sin((1.0 - a) * u) / e, (1.0 - a) / a);
  return left * right;
}

std::complex<double> sample_isotropic_stable(double alpha, double sigma, std::mt19937_64& rng) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 2]");
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "scale must be nonnegative");
  std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
  const double mix = alpha < 2.0 ? std::sqrt(sample_positive_stable(alpha / 2.0, rng)) : 1.0;
  const double re = normal(rng);
  const double im = normal(rng);
  return sigma * mix * Complex(re, im);
}

SamplePaths simulate_paths(const SimConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha <= 2.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 2]");
  if (config.replicates < 1) throw Error(ErrorCode::InvalidArgument, "replicate count must be >= 1");
  if (config.hi < config.lo) throw Error(ErrorCode::InvalidArgument, "index range hi < lo");
  if (config.g && config.g->dim() != config.f.dim())
    throw Error(ErrorCode::ShapeMismatch, "signal and noise densities differ in dimension");
  const AngleGrid grid(config.grid_size);
  const int T = config.f.dim();
  SamplePaths paths;
  paths.lo = config.lo;
  paths.hi = config.hi;
  paths.dim = T;
  paths.replicates = config.replicates;
  paths.has_noise = config.g.has_value();
  const std::size_t len = paths.length();
  const std::size_t M = grid.size();
  const std::size_t per = len * static_cast<std::size_t>(T);
  paths.signal.assign(config.replicates * per, Complex(0.0, 0.0));
  if (paths.has_noise) paths.noise.assign(config.replicates * per, Complex(0.0, 0.0));

  const std::vector<Complex> fs = cell_scales(config.f, grid, config.alpha);
  const std::vector<Complex> gs = paths.has_noise ? cell_scales(*config.g, grid, config.alpha) : std::vector<Complex>{};
  // phase[(j - lo) * M + m] = e^{i j theta_m}
  std::vector<Complex> phase(len * M);
  for (std::size_t j = 0; j < len; ++j)
    for (std::size_t m = 0; m < M; ++m)
      phase[j * M + m] = std::conj(grid.phase(config.lo + static_cast<long>(j), m));

  parallel_for(config.replicates, config.threads, [&](std::size_t b, std::size_t e) {
    std::vector<Complex> dz;
    for (std::size_t r = b; r < e; ++r) {
      std::mt19937_64 rng(config.seed + r);
      draw_path(config.alpha, fs, phase, T, M, len, rng, paths.signal.data() + r * per, dz);
      if (paths.has_noise) draw_path(config.alpha, gs, phase, T, M, len, rng, paths.noise.data() + r * per, dz);
    }
  });
  return paths;
}

ComparisonReport empirical_compare(const SamplePaths& paths, const std::vector<TrigPolynomial>& h_opt,
                                   const std::vector<TrigPolynomial>& h_perturbed, const Eigen::MatrixXcd& weights,
                                   std::optional<double> predicted) {
  if (paths.replicates < 2) throw Error(ErrorCode::InvalidArgument, "comparison needs at least two replicates");
  ComparisonReport rep;
  std::vector<double> eo = realized_errors(paths, h_opt, weights);
  std::vector<double> ep = realized_errors(paths, h_perturbed, weights);
  std::size_t smaller = 0;
  for (std::size_t r = 0; r < eo.size(); ++r)
    if (eo[r] < ep[r]) ++smaller;
  rep.fraction_optimal_smaller = static_cast<double>(smaller) / static_cast<double>(eo.size());
  rep.identical = eo == ep;
  rep.optimal = stats_of(std::move(eo));
  rep.perturbed = stats_of(std::move(ep));
  rep.predicted = predicted;
  if (predicted && rep.optimal.mse_stderr > 0.0) rep.z_score = (rep.optimal.mse - *predicted) / rep.optimal.mse_stderr;
  return rep;
}

}  // namespace stabint
