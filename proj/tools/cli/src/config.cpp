// SPDX-License-Identifier: Apache-2.0
#include "stabint_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>

namespace stabint::cli {

namespace {

std::string child(const std::string& path, std::string_view key) { return path + "." + std::string(key); }
std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::string type_name(const json& j) { return j.type_name(); }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number, got " + type_name(j));
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "value is not finite");
  return v;
}

long long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer, got " + type_name(j));
  return j.get<long long>();
}

int small_int(const json& j, const std::string& path) {
  const long long v = integer(j, path);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(path, "integer out of range");
  return static_cast<int>(v);
}

std::size_t count(const json& j, const std::string& path, std::size_t min_value) {
  const long long v = integer(j, path);
  if (v < static_cast<long long>(min_value)) throw ConfigError(path, "must be >= " + std::to_string(min_value));
  return static_cast<std::size_t>(v);
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string, got " + type_name(j));
  return j.get<std::string>();
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false, got " + type_name(j));
  return j.get<bool>();
}

Complex complex_value(const json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], item(path, 0)), number(j[1], item(path, 1))};
  throw ConfigError(path, "expected a number or a [re, im] pair");
}

const json& array(const json& j, const std::string& path, bool allow_empty = false) {
  if (!j.is_array()) throw ConfigError(path, "expected an array, got " + type_name(j));
  if (!allow_empty && j.empty()) throw ConfigError(path, "array must not be empty");
  return j;
}

std::vector<double> number_list(const json& j, const std::string& path) {
  array(j, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], item(path, i)));
  return out;
}

std::vector<Complex> complex_list(const json& j, const std::string& path) {
  array(j, path);
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_value(j[i], item(path, i)));
  return out;
}

Eigen::MatrixXcd complex_matrix(const json& j, const std::string& path) {
  array(j, path);
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = array(j[r], item(path, r));
    if (r == 0) cols = row.size();
    if (row.size() != cols)
      throw ConfigError(item(path, r), "row has " + std::to_string(row.size()) + " entries, expected " +
                                           std::to_string(cols));
  }
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_value(j[r][c], item(item(path, r), c));
  return m;
}

/// Object access that remembers visited keys so leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_, "expected an object, got " + type_name(j));
  }

  const std::string& path() const noexcept { return path_; }
  std::string path_of(std::string_view key) const { return child(path_, key); }

  const json* find(std::string_view key) {
    seen_.insert(std::string(key));
    const auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
  }

  const json& require(std::string_view key) {
    const json* v = find(key);
    if (!v) throw ConfigError(path_of(key), "required field is missing");
    return *v;
  }

  /// Marks keys as known without reading them.
  void allow(std::initializer_list<std::string_view> keys) {
    for (auto k : keys) seen_.insert(std::string(k));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(child(path_, key), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

TrigPolynomial parse_trig(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const int lo = r.find("lo") ? small_int(*r.find("lo"), r.path_of("lo")) : 0;
  auto coeffs = complex_list(r.require("coeffs"), r.path_of("coeffs"));
  r.finish();
  return TrigPolynomial(lo, std::move(coeffs));
}

ScalarDensity parse_scalar(const json& j, const std::string& path, const std::filesystem::path& base_dir) {
  ObjectReader r(j, path);
  const std::string kind = string(r.require("kind"), r.path_of("kind"));
  ScalarDensity out;
  if (kind == "constant") {
    const double level = number(r.require("level"), r.path_of("level"));
    if (level < 0.0) throw ConfigError(r.path_of("level"), "must be >= 0");
    out = ConstantDensity{level};
  } else if (kind == "pow_trig") {
    PowTrigMagnitude p;
    p.base = parse_trig(r.require("base"), r.path_of("base"));
    p.exponent = number(r.require("exponent"), r.path_of("exponent"));
    out = std::move(p);
  } else if (kind == "rational_ar") {
    RationalAR ar;
    ar.scale = number(r.require("scale"), r.path_of("scale"));
    if (!(ar.scale > 0.0)) throw ConfigError(r.path_of("scale"), "must be > 0");
    if (const json* pole = r.find("pole")) ar.pole = number(*pole, r.path_of("pole"));
    if (!(std::abs(ar.pole) < 1.0)) throw ConfigError(r.path_of("pole"), "must satisfy |pole| < 1");
    out = ar;
  } else if (kind == "sampled") {
    const json* file = r.find("file");
    const json* angles = r.find("angles");
    const json* values = r.find("values");
    SampledDensity s;
    if (file) {
      if (angles || values) throw ConfigError(path, "give either file or angles/values, not both");
      std::filesystem::path p = string(*file, r.path_of("file"));
      if (p.is_relative()) p = base_dir / p;
      try {
        s = read_sampled_density(p);
      } catch (const ConfigError& e) {
        throw ConfigError(r.path_of("file"), e.what());
      }
    } else {
      if (!angles) throw ConfigError(r.path_of("angles"), "required field is missing (or give file)");
      if (!values) throw ConfigError(r.path_of("values"), "required field is missing");
      s.angles = number_list(*angles, r.path_of("angles"));
      s.values = number_list(*values, r.path_of("values"));
      if (s.angles.size() != s.values.size())
        throw ConfigError(r.path_of("values"), "length differs from angles");
    }
    for (std::size_t i = 0; i < s.values.size(); ++i)
      if (s.values[i] < 0.0) throw ConfigError(item(r.path_of("values"), i), "density value must be >= 0");
    out = std::move(s);
  } else {
    throw ConfigError(r.path_of("kind"),
                      "unknown kind '" + kind + "' (expected constant, pow_trig, rational_ar, sampled, structured)");
  }
  r.finish();
  return out;
}

SpectralDensity parse_density(const json& j, const std::string& path, const std::filesystem::path& base_dir) {
  if (j.is_object() && j.contains("kind") && j["kind"] == "structured") {
    ObjectReader r(j, path);
    r.allow({"kind"});
    const int dim = small_int(r.require("dim"), r.path_of("dim"));
    if (dim < 1) throw ConfigError(r.path_of("dim"), "must be >= 1");
    const std::string tpath = r.path_of("terms");
    const json& terms = array(r.require("terms"), tpath);
    std::vector<DensityTerm> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      ObjectReader t(terms[i], item(tpath, i));
      DensityTerm term;
      term.weight = complex_matrix(t.require("weight"), t.path_of("weight"));
      if (term.weight.rows() != dim || term.weight.cols() != dim)
        throw ConfigError(t.path_of("weight"), "must be " + std::to_string(dim) + "x" + std::to_string(dim));
      term.shape = parse_scalar(t.require("shape"), t.path_of("shape"), base_dir);
      t.finish();
      out.push_back(std::move(term));
    }
    r.finish();
    try {
      return SpectralDensity::structured(dim, std::move(out));
    } catch (const Error& e) {
      throw ConfigError(path, e.what());
    }
  }
  return SpectralDensity(parse_scalar(j, path, base_dir));
}

DensityClassSpec parse_class(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string kind = string(r.require("kind"), r.path_of("kind"));
  DensityClassSpec out;
  if (kind == "D0") {
    D0Class c;
    if (const json* p = r.find("P")) c.P = number(*p, r.path_of("P"));
    if (!(c.P > 0.0)) throw ConfigError(r.path_of("P"), "must be > 0");
    out = c;
  } else if (kind == "DBeta") {
    DBetaClass c;
    c.beta = number(r.require("beta"), r.path_of("beta"));
    if (!(c.beta > 0.0)) throw ConfigError(r.path_of("beta"), "must be > 0");
    if (const json* p = r.find("P")) c.P = number(*p, r.path_of("P"));
    if (!(c.P > 0.0)) throw ConfigError(r.path_of("P"), "must be > 0");
    out = c;
  } else if (kind == "DMMinus") {
    DMMinusClass c;
    c.moments = number_list(r.require("moments"), r.path_of("moments"));
    out = std::move(c);
  } else if (kind == "DMinusOne") {
    DMinusOneClass c;
    if (const json* p = r.find("P1")) c.P1 = number(*p, r.path_of("P1"));
    if (!(c.P1 > 0.0)) throw ConfigError(r.path_of("P1"), "must be > 0");
    out = c;
  } else {
    throw ConfigError(r.path_of("kind"), "unknown class '" + kind + "' (expected D0, DBeta, DMMinus, DMinusOne)");
  }
  r.finish();
  return out;
}

void parse_solver(const json& j, const std::string& path, SolverOptions& s) {
  ObjectReader r(j, path);
  if (const json* v = r.find("newton_tol")) s.newton_tol = number(*v, r.path_of("newton_tol"));
  if (const json* v = r.find("max_iterations")) s.max_iterations = small_int(*v, r.path_of("max_iterations"));
  if (const json* v = r.find("fd_step")) s.fd_step = number(*v, r.path_of("fd_step"));
  if (const json* v = r.find("cond_limit")) s.cond_limit = number(*v, r.path_of("cond_limit"));
  if (const json* v = r.find("fourier_window")) s.fourier_window = small_int(*v, r.path_of("fourier_window"));
  if (const json* v = r.find("multistart")) s.multistart = small_int(*v, r.path_of("multistart"));
  if (const json* v = r.find("seed")) s.seed = static_cast<std::uint64_t>(count(*v, r.path_of("seed"), 0));
  if (const json* v = r.find("positivity_floor")) s.positivity_floor = number(*v, r.path_of("positivity_floor"));
  if (const json* v = r.find("continuation")) s.continuation = boolean(*v, r.path_of("continuation"));
  r.finish();
  if (!(s.newton_tol > 0.0)) throw ConfigError(r.path_of("newton_tol"), "must be > 0");
  if (s.max_iterations < 1) throw ConfigError(r.path_of("max_iterations"), "must be >= 1");
  if (s.fourier_window < 0) throw ConfigError(r.path_of("fourier_window"), "must be >= 0");
  if (s.multistart < 0) throw ConfigError(r.path_of("multistart"), "must be >= 0");
}

void parse_minimax(const json& j, const std::string& path, RunConfig& cfg) {
  ObjectReader r(j, path);
  if (const json* v = r.find("max_iterations")) cfg.minimax.max_iterations = small_int(*v, r.path_of("max_iterations"));
  if (const json* v = r.find("relaxation")) cfg.minimax.relaxation = number(*v, r.path_of("relaxation"));
  if (const json* v = r.find("tol")) cfg.minimax.tol = number(*v, r.path_of("tol"));
  if (const json* v = r.find("probes")) cfg.probes = static_cast<int>(count(*v, r.path_of("probes"), 0));
  r.finish();
  if (!(cfg.minimax.relaxation > 0.0 && cfg.minimax.relaxation <= 1.0))
    throw ConfigError(r.path_of("relaxation"), "must lie in (0, 1]");
  if (!(cfg.minimax.tol > 0.0)) throw ConfigError(r.path_of("tol"), "must be > 0");
}

void parse_simulate(const json& j, const std::string& path, SimulationSettings& s) {
  ObjectReader r(j, path);
  if (const json* v = r.find("replicates")) s.replicates = count(*v, r.path_of("replicates"), 2);
  if (const json* v = r.find("grid_size")) s.grid_size = count(*v, r.path_of("grid_size"), 2);
  if (const json* v = r.find("lo")) s.lo = small_int(*v, r.path_of("lo"));
  if (const json* v = r.find("hi")) s.hi = small_int(*v, r.path_of("hi"));
  if (const json* v = r.find("threads")) s.threads = static_cast<unsigned>(count(*v, r.path_of("threads"), 0));
  if (const json* v = r.find("perturb")) {
    ObjectReader p(*v, r.path_of("perturb"));
    if (const json* c = p.find("component")) s.perturb_component = small_int(*c, p.path_of("component"));
    if (const json* c = p.find("index")) s.perturb_index = small_int(*c, p.path_of("index"));
    if (const json* c = p.find("offset")) s.perturb_offset = complex_value(*c, p.path_of("offset"));
    p.finish();
  }
  r.finish();
}

bool needs_problem(Command c) {
  return c == Command::Estimate || c == Command::EstimateNoisy || c == Command::Minimax || c == Command::Simulate;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::Estimate, Command::EstimateNoisy, Command::Minimax, Command::Simulate,
                    Command::Factorize, Command::Validate})
    if (command_name(c) == name) return c;
  return std::nullopt;
}

std::string_view command_name(Command command) {
  switch (command) {
    case Command::Estimate: return "estimate";
    case Command::EstimateNoisy: return "estimate-noisy";
    case Command::Minimax: return "minimax";
    case Command::Simulate: return "simulate";
    case Command::Factorize: return "factorize";
    case Command::Validate: return "validate";
  }
  return "unknown";
}

SampledDensity read_sampled_density(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open density file");
  SampledDensity s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto comma = line.find(',');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (comma == std::string::npos) throw ConfigError(where, "expected 'angle,value'");
    try {
      std::size_t used = 0;
      const std::string a = line.substr(0, comma);
      const std::string v = line.substr(comma + 1);
      const double angle = std::stod(a, &used);
      if (a.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("trailing text");
      const double value = std::stod(v, &used);
      if (v.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("trailing text");
      if (!std::isfinite(angle) || !std::isfinite(value)) throw std::invalid_argument("not finite");
      if (angle < -std::numbers::pi || angle >= std::numbers::pi) throw ConfigError(where, "angle outside [-pi, pi)");
      s.angles.push_back(angle);
      s.values.push_back(value);
    } catch (const std::logic_error&) {
      throw ConfigError(where, "malformed number");
    }
  }
  if (s.angles.size() < 2) throw ConfigError(path.string(), "need at least two samples");
  return s;
}

RunConfig parse_config(const json& doc, Command command, const Overrides& overrides,
                       const std::filesystem::path& base_dir) {
  RunConfig cfg;
  cfg.command = command;
  ObjectReader root(doc, "$");
  root.allow({"description"});

  const long long version = integer(root.require("version"), "$.version");
  if (version != kConfigVersion)
    throw ConfigError("$.version", "unsupported version " + std::to_string(version) + " (expected " +
                                       std::to_string(kConfigVersion) + ")");
  if (const json* c = root.find("command")) {
    const std::string name = string(*c, "$.command");
    if (name != command_name(command))
      throw ConfigError("$.command", "document is for '" + name + "' but '" + std::string(command_name(command)) +
                                         "' was requested");
  }

  const bool problem = needs_problem(command);
  if (const json* a = problem ? &root.require("alpha") : root.find("alpha")) {
    cfg.alpha = number(*a, "$.alpha");
    if (!(cfg.alpha > 1.0 && cfg.alpha <= 2.0)) throw ConfigError("$.alpha", "must lie in (1, 2]");
  }

  if (const json* p = root.find("period")) {
    cfg.period = small_int(*p, "$.period");
    if (*cfg.period < 1) throw ConfigError("$.period", "must be >= 1");
  }
  if (overrides.period) {
    if (*overrides.period < 1) throw ConfigError("--period", "must be >= 1");
    cfg.period = overrides.period;
  }

  const json* flat = root.find("weights");
  const json* matrix = root.find("weight_matrix");
  if (flat && matrix) throw ConfigError("$", "give either weights or weight_matrix, not both");
  if (problem && !flat && !matrix) throw ConfigError("$.weights", "required field is missing");
  if (flat) {
    const auto w = complex_list(*flat, "$.weights");
    if (cfg.period) {
      const auto T = static_cast<std::size_t>(*cfg.period);
      if (w.size() % T != 0)
        throw ConfigError("$.weights", std::to_string(w.size()) + " entries is not a multiple of the period " +
                                           std::to_string(T));
      PeriodicSpec spec;
      spec.period = *cfg.period;
      spec.horizon = static_cast<int>(w.size() / T) - 1;
      spec.weights = w;
      cfg.weights = block_weights(spec);
    } else {
      cfg.weights = Eigen::Map<const Eigen::RowVectorXcd>(w.data(), static_cast<Eigen::Index>(w.size()));
    }
  } else if (matrix) {
    if (cfg.period) throw ConfigError("$.weight_matrix", "use a flat weights list together with a period");
    cfg.weights = complex_matrix(*matrix, "$.weight_matrix");
  }

  const bool needs_f = command == Command::Estimate || command == Command::EstimateNoisy ||
                       command == Command::Simulate;
  if (const json* f = needs_f ? &root.require("f") : root.find("f")) cfg.f = parse_density(*f, "$.f", base_dir);
  if (const json* g = command == Command::EstimateNoisy ? &root.require("g") : root.find("g"))
    cfg.g = parse_density(*g, "$.g", base_dir);

  if (needs_f && cfg.weights.size() > 0) {
    if (cfg.f.dim() != cfg.weights.rows())
      throw ConfigError("$.f", "density dimension " + std::to_string(cfg.f.dim()) + " does not match " +
                                   std::to_string(cfg.weights.rows()) + " weight components");
    if (cfg.g && cfg.g->dim() != cfg.weights.rows())
      throw ConfigError("$.g", "density dimension " + std::to_string(cfg.g->dim()) + " does not match " +
                                   std::to_string(cfg.weights.rows()) + " weight components");
  }

  if (const json* m = root.find("grid")) cfg.grid = count(*m, "$.grid", 2);
  if (const json* s = root.find("solver")) parse_solver(*s, "$.solver", cfg.solver);
  if (const json* s = root.find("seed")) cfg.seed = static_cast<std::uint64_t>(count(*s, "$.seed", 0));

  if (const json* c = command == Command::Minimax ? &root.require("class") : root.find("class"))
    cfg.density_class = parse_class(*c, "$.class");
  if (const json* m = root.find("minimax")) parse_minimax(*m, "$.minimax", cfg);
  if (command == Command::Minimax && cfg.weights.rows() != 1)
    throw ConfigError("$.weights", "minimax classes take scalar weights (one component)");

  if (const json* s = root.find("simulate")) parse_simulate(*s, "$.simulate", cfg.simulate);

  if (const json* p = command == Command::Factorize ? &root.require("polynomial") : root.find("polynomial"))
    cfg.polynomial = parse_trig(*p, "$.polynomial");
  if (const json* t = root.find("factor_tol")) cfg.factor_tol = number(*t, "$.factor_tol");

  root.finish();

  if (overrides.grid) cfg.grid = *overrides.grid;
  if (overrides.seed) {
    cfg.seed = *overrides.seed;
    cfg.solver.seed = *overrides.seed;
  }
  if (overrides.tol) {
    if (!(*overrides.tol > 0.0)) throw ConfigError("--tol", "must be > 0");
    switch (command) {
      case Command::Minimax: cfg.minimax.tol = *overrides.tol; break;
      case Command::Factorize: cfg.factor_tol = *overrides.tol; break;
      default: cfg.solver.newton_tol = *overrides.tol; break;
    }
  }
  if (cfg.grid < 2 || (cfg.grid & (cfg.grid - 1)) != 0)
    throw ConfigError(overrides.grid ? "--grid" : "$.grid", "grid size must be a power of two");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, Command command, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(doc, command, overrides, path.parent_path());
}

}  // namespace stabint::cli
