// SPDX-License-Identifier: Apache-2.0
#include "stabint_cli/validate.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "stabint/stabint.hpp"
#include "stabint_cli/manifest_data.hpp"

namespace stabint::cli {

namespace {

using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

struct Measurement {
  double value = 0.0;
  double reference = 0.0;
  std::string note;
};

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd row(std::initializer_list<Complex> v) {
  Eigen::MatrixXcd m(1, static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const auto& z : v) m(0, i++) = z;
  return m;
}

/// f = |e^{i theta} + 0.5|^{exponent}
SpectralDensity ar1_density(double exponent) {
  return PowTrigMagnitude{TrigPolynomial(0, {0.5, 1.0}), exponent};
}

/// Parameters of the two-component stationary instances: F = [[f, f], [f, f + g]].
struct StationaryInstance {
  double P1 = 1.0, P2 = 2.0, b1 = 0.5, b2 = 0.0;
  bool ar_noise_component = false;  // second component rational or white
  double w_alpha = 1.0, w_beta = 1.0, w_gamma = 1.0, w_delta = 1.0;

  NoisyProblemSpec problem(const AngleGrid& grid) const {
    Eigen::MatrixXcd all = Eigen::MatrixXcd::Ones(2, 2);
    Eigen::MatrixXcd corner = Eigen::MatrixXcd::Zero(2, 2);
    corner(1, 1) = 1.0;
    NoisyProblemSpec p;
    p.alpha = 2.0;
    p.grid = grid;
    p.weights.resize(2, 2);
    p.weights << w_alpha, w_gamma, w_beta, w_delta;
    const ScalarDensity second = ar_noise_component ? ScalarDensity(RationalAR{P2, b2})
                                                    : ScalarDensity(ConstantDensity{P2 / (2 * kPi)});
    p.f = SpectralDensity::structured(2, {{all, RationalAR{P1, b1}}, {corner, second}});
    p.g = SpectralDensity::structured(2, {{Eigen::MatrixXcd::Zero(2, 2), ConstantDensity{0.0}}});
    return p;
  }
};

/// Closed forms; with b2 = 0 they reduce to the white second component.
struct StationaryClosedForm {
  Eigen::VectorXd c;            // time-major: (t0 comp0, t0 comp1, t1 comp0, t1 comp1)
  double h1_minus1 = 0, h1_2 = 0, h2_minus1 = 0, h2_2 = 0;
  double delta = 0;
};

StationaryClosedForm closed_form(const StationaryInstance& e) {
  const double a = e.w_alpha, b = e.w_beta, g = e.w_gamma, d = e.w_delta;
  const double q1 = 1 + e.b1 * e.b1 + std::pow(e.b1, 4);
  const double q2 = 1 + e.b2 * e.b2 + std::pow(e.b2, 4);
  const double A = (1 + e.b1 * e.b1) / q1, B = (1 + e.b2 * e.b2) / q2;
  const double C = e.b1 / q1, D = e.b2 / q2;
  StationaryClosedForm out;
  out.c.resize(4);
  out.c(0) = e.P1 / (2 * kPi) * (A * (a + b) + C * (g + d));
  out.c(1) = out.c(0) + e.P2 / (2 * kPi) * (B * b + D * d);
  out.c(2) = e.P1 / (2 * kPi) * (C * (a + b) + A * (g + d));
  out.c(3) = out.c(2) + e.P2 / (2 * kPi) * (D * b + B * d);
  const double s1 = (a + b) * (1 + e.b1 * e.b1) + e.b1 * (g + d);
  const double s2 = (g + d) * (1 + e.b1 * e.b1) + e.b1 * (a + b);
  const double t1 = b * (1 + e.b2 * e.b2) + e.b2 * d;
  const double t2 = d * (1 + e.b2 * e.b2) + e.b2 * b;
  out.h1_minus1 = C * s1 - D * t1;
  out.h1_2 = C * s2 - D * t2;
  out.h2_minus1 = D * t1;
  out.h2_2 = D * t2;
  out.delta = e.P1 / (2 * kPi * q1) *
                  ((a + b) * (a + b) * (1 + e.b1 * e.b1) + (g + d) * (g + d) * (1 + e.b1 * e.b1) +
                   2 * e.b1 * (g + d) * (a + b)) +
              e.P2 / (2 * kPi * q2) * ((b * b + d * d) * (1 + e.b2 * e.b2) + 2 * e.b2 * d * b);
  return out;
}

struct StationaryCheck {
  double c_dev = 0, h_dev = 0, delta = 0, delta_ref = 0;
};

StationaryCheck stationary_check(const StationaryInstance& e, const AngleGrid& grid) {
  const StationarySolution st = stationary_pipeline(e.problem(grid));
  const StationaryClosedForm cf = closed_form(e);
  StationaryCheck out;
  for (int i = 0; i < 4; ++i)
    out.c_dev = std::max(out.c_dev, std::abs(st.c_stationary(i % 2, i / 2) - cf.c(i)));
  const auto& h = st.solution.h_fourier;
  const std::map<int, double> want1 = {{-1, cf.h1_minus1}, {2, cf.h1_2}};
  const std::map<int, double> want2 = {{-1, cf.h2_minus1}, {2, cf.h2_2}};
  for (int comp = 0; comp < 2; ++comp) {
    const auto& want = comp == 0 ? want1 : want2;
    const TrigPolynomial& p = h[static_cast<std::size_t>(comp)];
    for (int k = p.lo(); k <= p.hi(); ++k) {
      const auto it = want.find(k);
      out.h_dev = std::max(out.h_dev, std::abs(p.coeff(k) - (it == want.end() ? 0.0 : it->second)));
    }
  }
  out.delta = st.delta;
  out.delta_ref = cf.delta;
  return out;
}

/// Shared state so expensive solves run once per validate invocation.
class Context {
 public:
  explicit Context(std::size_t grid_size) : grid_(grid_size) {}

  const AngleGrid& grid() const { return grid_; }

  ProblemSpec problem(double alpha, Eigen::MatrixXcd weights, SpectralDensity f) const {
    ProblemSpec p;
    p.alpha = alpha;
    p.weights = std::move(weights);
    p.f = std::move(f);
    p.grid = grid_;
    return p;
  }

  const ProblemSpec& ar1_problem(bool alpha43) {
    auto& slot = alpha43 ? ar1_43_problem_ : ar1_2_problem_;
    if (!slot) slot = problem(alpha43 ? 4.0 / 3.0 : 2.0, row({1.0, 1.0}), ar1_density(alpha43 ? -4.0 / 3.0 : -2.0));
    return *slot;
  }

  const Solution& ar1(bool alpha43) {
    auto& slot = alpha43 ? ar1_43_ : ar1_2_;
    if (!slot) slot = solve_coefficients(ar1_problem(alpha43));
    return *slot;
  }

  const StationaryCheck& stationary(bool second) {
    auto& slot = second ? ar_second_ : white_second_;
    if (!slot) {
      StationaryInstance e;
      if (second) {
        e.b2 = -0.3;
        e.ar_noise_component = true;
      }
      slot = stationary_check(e, grid_);
    }
    return *slot;
  }

 private:
  AngleGrid grid_;
  std::optional<ProblemSpec> ar1_43_problem_, ar1_2_problem_;
  std::optional<Solution> ar1_43_, ar1_2_;
  std::optional<StationaryCheck> white_second_, ar_second_;
};

Measurement closed_form_sweep(Context& ctx, double alpha, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> expo(-2.0, 2.0);
  std::uniform_real_distribution<double> scale(0.2, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    Complex u1(unit(rng), unit(rng)), u2(unit(rng), unit(rng));
    const double shrink = 0.7 / std::max(0.7, std::abs(u1) + std::abs(u2));
    u1 *= shrink;
    u2 *= shrink;
    const SpectralDensity f = PowTrigMagnitude{TrigPolynomial(0, {1.0, u1, u2}).scaled(scale(rng)), expo(rng)};
    const Complex a(unit(rng) * 2.0, unit(rng) * 2.0);
    const Solution s = solve_coefficients(ctx.problem(alpha, row({a}), f));
    const Complex c = single_point_closed_form(a, f, alpha, ctx.grid());
    worst = std::max(worst, std::abs(s.c(0, 0) - c));
  }
  return {worst, 0.0, "max over 10 densities"};
}

Measurement h_coefficient(Context& ctx, int k) {
  return {ctx.ar1(true).h_fourier[0].coeff(k).real(), 0.0, {}};
}

Measurement cubic_vs_generic(Context& ctx, Eigen::MatrixXcd weights) {
  const ProblemSpec p = ctx.problem(4.0 / 3.0, std::move(weights), ar1_density(-4.0 / 3.0));
  const Solution generic = solve_coefficients(p);
  const Solution cubic = alpha43_expansion(p);
  return {max_abs_diff(generic.c, cubic.c), 0.0, {}};
}

Measurement h2_formula(Context& ctx) {
  const Solution& s = ctx.ar1(true);
  const std::vector<Complex> c = {s.c(0, 0), s.c(0, 1)};
  const CubicExpansion cx = cubic_signed_power_coeffs(c);
  const TrigPolynomial r = neg_power_coeffs(ar1_density(-4.0 / 3.0), 3.0, 2, ctx.grid());
  const auto& b = cx.cubic;
  const Complex corrected = -(b.coeff(0) * r.coeff(2) + b.coeff(1) * r.coeff(1) + b.coeff(2) * r.coeff(0));
  const Complex printed = -(b.coeff(0) * r.coeff(2) + b.coeff(1) * r.coeff(1) + b.coeff(1) * r.coeff(0));
  std::ostringstream note;
  note << std::setprecision(4) << "with b_1 r_0 as last term: " << printed.real() << "; solver h_2: "
       << s.h_fourier[0].coeff(2).real();
  return {corrected.real(), 0.0, note.str()};
}

Measurement noisy_g0(Context& ctx) {
  NoisyProblemSpec p;
  static_cast<ProblemSpec&>(p) = ctx.problem(1.5, row({1.0, 0.5}), RationalAR{1.0, 0.5});
  p.g = ConstantDensity{0.0};
  const Solution noisy = solve_coefficients_noisy(p);
  const Solution clean = solve_coefficients(p);
  return {max_abs_diff(noisy.c, clean.c), 0.0, {}};
}

std::vector<NoisyProblemSpec> alpha2_noisy_instances(Context& ctx) {
  std::vector<NoisyProblemSpec> out;
  NoisyProblemSpec scalar;
  static_cast<ProblemSpec&>(scalar) = ctx.problem(2.0, row({1.0, 0.5}), RationalAR{1.0, 0.5});
  scalar.g = ConstantDensity{0.3};
  out.push_back(scalar);
  StationaryInstance e;
  e.b2 = -0.3;
  e.ar_noise_component = true;
  NoisyProblemSpec vec = e.problem(ctx.grid());
  vec.g = SpectralDensity::structured(2, {{Eigen::MatrixXcd::Identity(2, 2) * 0.2, ConstantDensity{1.0}}});
  out.push_back(vec);
  return out;
}

Measurement noisy_vs_blocks(Context& ctx) {
  double worst = 0.0;
  for (const auto& p : alpha2_noisy_instances(ctx)) {
    const Solution noisy = solve_coefficients_noisy(p);
    const StationarySolution st = stationary_pipeline(p);
    worst = std::max(worst, max_abs_diff(noisy.c, st.solution.c));
  }
  return {worst, 0.0, "scalar and two-component instances"};
}

Measurement quadratic_vs_quadrature(Context& ctx) {
  double worst = 0.0;
  for (const auto& p : alpha2_noisy_instances(ctx)) {
    const StationarySolution st = stationary_pipeline(p);
    worst = std::max(worst, std::abs(2 * kPi * st.delta - error_norm_noisy(p, st.solution.h_grid)));
  }
  return {worst, 0.0, "max |2 pi delta - quadrature|"};
}

using CheckFn = std::function<Measurement(Context&)>;

const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> checks = [] {
    std::map<std::string, CheckFn> m;
    const std::pair<const char*, double> alphas[] = {{"1.3", 1.3}, {"1.5", 1.5}, {"1.8", 1.8}, {"2", 2.0}};
    std::uint64_t seed = 101;
    for (const auto& [name, alpha] : alphas) {
      const double a = alpha;
      const std::uint64_t s = seed++;
      m[std::string("single_point_closed_form_alpha_") + name] = [a, s](Context& ctx) {
        return closed_form_sweep(ctx, a, s);
      };
    }
    m["single_point_constant_density_alpha2"] = [](Context& ctx) {
      const Solution s = solve_coefficients(ctx.problem(2.0, row({1.0}), ConstantDensity{1.0 / (2 * kPi)}));
      return Measurement{s.c(0, 0).real(), 1.0 / (2 * kPi), "c = a / (2 pi), not a"};
    };
    m["single_point_unit_density_alpha2"] = [](Context& ctx) {
      const Solution s = solve_coefficients(ctx.problem(2.0, row({1.0}), ConstantDensity{1.0}));
      return Measurement{s.c(0, 0).real(), 0.0, {}};
    };
    m["ar1_alpha43_c0"] = [](Context& ctx) { return Measurement{ctx.ar1(true).c(0, 0).real(), 0, {}}; };
    m["ar1_alpha43_c1"] = [](Context& ctx) { return Measurement{ctx.ar1(true).c(0, 1).real(), 0, {}}; };
    for (const auto& [name, k] : std::vector<std::pair<std::string, int>>{
             {"m3", -3}, {"m2", -2}, {"m1", -1}, {"2", 2}, {"3", 3}, {"4", 4}}) {
      const int kk = k;
      m["ar1_alpha43_h_" + name] = [kk](Context& ctx) { return h_coefficient(ctx, kk); };
    }
    m["ar1_alpha43_error"] = [](Context& ctx) { return Measurement{ctx.ar1(true).error, 0, {}}; };
    m["ar1_alpha43_h2_formula"] = h2_formula;
    m["ar1_alpha43_orthogonality"] = [](Context& ctx) {
      const auto& h = ctx.ar1(true).h_fourier[0];
      return Measurement{std::max(std::abs(h.coeff(0)), std::abs(h.coeff(1))), 0.0, {}};
    };
    m["cubic_expansion_vs_generic_N1"] = [](Context& ctx) { return cubic_vs_generic(ctx, row({1.0, 1.0})); };
    m["cubic_expansion_vs_generic_N2"] = [](Context& ctx) { return cubic_vs_generic(ctx, row({1.0, 0.5, 0.25})); };
    m["ar1_gaussian_c0"] = [](Context& ctx) { return Measurement{ctx.ar1(false).c(0, 0).real(), 0, {}}; };
    m["ar1_gaussian_c1"] = [](Context& ctx) { return Measurement{ctx.ar1(false).c(0, 1).real(), 0, {}}; };
    m["ar1_gaussian_error"] = [](Context& ctx) { return Measurement{ctx.ar1(false).error, 0, {}}; };
    m["ar1_gaussian_block_toeplitz"] = [](Context& ctx) {
      const Solution g = gaussian_special(ctx.ar1_problem(false));
      return Measurement{max_abs_diff(g.c, ctx.ar1(false).c), 0.0, {}};
    };
    for (const bool second : {false, true}) {
      const std::string base = second ? "stationary_ar_" : "stationary_white_";
      m[base + "c"] = [second](Context& ctx) {
        return Measurement{ctx.stationary(second).c_dev, 0.0, "max over 4 entries"};
      };
      m[base + "h"] = [second](Context& ctx) {
        return Measurement{ctx.stationary(second).h_dev, 0.0, "max over all coefficients"};
      };
      m[base + "delta"] = [second](Context& ctx) {
        return Measurement{ctx.stationary(second).delta, ctx.stationary(second).delta_ref, {}};
      };
    }
    m["reduction_noisy_g0_vs_noiseless"] = noisy_g0;
    m["reduction_noisy_alpha2_vs_blocks"] = noisy_vs_blocks;
    m["reduction_quadratic_form_vs_quadrature"] = quadratic_vs_quadrature;
    return m;
  }();
  return checks;
}

std::string field_string(const json& j, const char* key) {
  const auto it = j.find(key);
  return it != j.end() && it->is_string() ? it->get<std::string>() : std::string();
}

}  // namespace

bool ValidationReport::all_passed() const noexcept {
  if (rows.empty()) return false;
  for (const auto& r : rows)
    if (!r.passed) return false;
  return true;
}

std::string_view builtin_manifest() { return kValidateManifest; }

ValidationReport run_validation(std::string_view manifest_json, std::size_t grid_size) {
  const json manifest = json::parse(manifest_json);
  Context ctx(grid_size);
  ValidationReport report;
  for (const json& entry : manifest.at("checks")) {
    CheckRow row;
    row.id = field_string(entry, "id");
    row.kind = field_string(entry, "kind");
    row.description = field_string(entry, "description");
    row.tolerance = entry.value("tolerance", 0.0);
    const auto start = std::chrono::steady_clock::now();
    const auto& checks = registry();
    const auto it = checks.find(row.id);
    if (it == checks.end()) {
      row.note = "no implementation for this check";
    } else {
      try {
        const Measurement m = it->second(ctx);
        row.value = m.value;
        row.reference = entry.contains("target") ? entry["target"].get<double>() : m.reference;
        row.deviation = std::abs(row.value - row.reference);
        row.passed = std::isfinite(row.deviation) && row.deviation <= row.tolerance;
        row.note = m.note;
      } catch (const std::exception& e) {
        row.note = e.what();
      }
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string format_table(const ValidationReport& report) {
  std::size_t width = 5;
  for (const auto& r : report.rows) width = std::max(width, r.id.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(width)) << "check" << "  " << std::setw(11) << "kind" << "  "
     << std::right << std::setw(14) << "value" << "  " << std::setw(14) << "reference" << "  " << std::setw(10)
     << "deviation" << "  " << std::setw(9) << "tolerance" << "  result\n";
  int passed = 0;
  for (const auto& r : report.rows) {
    os << std::left << std::setw(static_cast<int>(width)) << r.id << "  " << std::setw(11) << r.kind << "  "
       << std::right << std::setprecision(8) << std::setw(14) << r.value << "  " << std::setw(14) << r.reference
       << "  " << std::setprecision(3) << std::setw(10) << r.deviation << "  " << std::setw(9) << r.tolerance
       << "  " << (r.passed ? "PASS" : "FAIL");
    if (!r.note.empty()) os << "  (" << r.note << ")";
    os << '\n';
    passed += r.passed ? 1 : 0;
  }
  os << passed << "/" << report.rows.size() << " checks passed\n";
  return os.str();
}

nlohmann::json to_json(const ValidationReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"id", r.id},
                    {"kind", r.kind},
                    {"description", r.description},
                    {"value", r.value},
                    {"reference", r.reference},
                    {"deviation", r.deviation},
                    {"tolerance", r.tolerance},
                    {"passed", r.passed},
                    {"note", r.note}});
  }
  return rows;
}

}  // namespace stabint::cli
