#pragma once

// Run configuration: flat "section.key = value" text with '#' comments.
//
//   mode = continuum            # continuum | lattice | tensor_box
//   alpha = 0.5, 1, 2, inf
//   gamma.shape = interval      # interval | intervals | box | cube | ball | polygon
//   gamma.lower = -1
//   gamma.upper = 1
//   omega.shape = intervals
//   omega.intervals = 0 1, 2 3
//   L = 20
//   grid.min = 20
//   grid.max = 200
//   grid.count = 8
//
// Numbers accept "pi" products and quotients such as "pi/2" or "3*pi/4".
// Unknown keys, duplicate keys and malformed values are rejected with the
// offending line number.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fermi/asymptotics.hpp"
#include "fermi/discretize.hpp"
#include "fermi/entropy_functionals.hpp"
#include "fermi/errors.hpp"
#include "fermi/geometry.hpp"
#include "fermi/spectra.hpp"

namespace fermi {

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class Mode { continuum, lattice, tensor_box };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::continuum: return "continuum";
    case Mode::lattice: return "lattice";
    case Mode::tensor_box: return "tensor_box";
  }
  return "?";
}

inline std::string to_string(Route r) {
  switch (r) {
    case Route::automatic: return "auto";
    case Route::direct: return "direct";
    case Route::tensor: return "tensor";
  }
  return "?";
}

inline std::string to_string(NyquistPolicy p) { return p == NyquistPolicy::reject ? "reject" : "warn"; }
inline std::string to_string(FitWeights w) { return w == FitWeights::unit ? "unit" : "inverse_area"; }

enum class Command { entropy, sweep, jcoeff, functional, validate };

inline std::string to_string(Command c) {
  switch (c) {
    case Command::entropy: return "entropy";
    case Command::sweep: return "sweep";
    case Command::jcoeff: return "jcoeff";
    case Command::functional: return "functional";
    case Command::validate: return "validate";
  }
  return "?";
}

struct GridSpec {
  std::vector<double> values;  ///< explicit points; overrides min/max/count
  double min = 0.0;
  double max = 0.0;
  int count = 0;

  bool empty() const { return values.empty() && count == 0; }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct RunConfig {
  Mode mode = Mode::continuum;
  std::vector<RenyiOrder> alphas{RenyiOrder::one()};
  std::optional<Domain> gamma;
  std::optional<Domain> omega;
  double k_F = std::numbers::pi / 2.0;
  std::optional<double> L;
  GridSpec grid;
  double nodes_per_unit = 0.0;
  double nodes_per_wavelength = 12.0;
  quadrature::PanelRule rule{};
  NyquistPolicy nyquist = NyquistPolicy::reject;
  Route route = Route::automatic;
  std::optional<double> fit_min;
  std::optional<double> fit_max;
  FitWeights fit_weights = FitWeights::unit;
  std::size_t max_nodes = 6000;
  std::size_t max_lattice = 4000;
  double spectral_warn = 1e-7;
  double spectral_abort = 1e-3;
  int j_resolution = 0;  ///< 0: 512 boundary nodes in d = 2, 24 in d = 3
  std::size_t mc_samples = 0;
  double functional_tol = 1e-12;
  std::uint64_t seed = 1;
  std::string output_json;
  std::string output_csv;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  PipelineConfig pipeline() const {
    PipelineConfig p;
    p.discretization.nodes_per_unit = nodes_per_unit;
    p.discretization.nodes_per_wavelength = nodes_per_wavelength;
    p.discretization.rule = rule;
    p.discretization.max_nodes = max_nodes;
    p.discretization.nyquist = nyquist;
    p.thresholds.warn = spectral_warn;
    p.thresholds.abort = spectral_abort;
    p.route = mode == Mode::tensor_box ? Route::tensor : route;
    return p;
  }

  SpectralThresholds thresholds() const { return {spectral_warn, spectral_abort, SpectralThresholds{}.hermitian_tol}; }

  int dim() const { return mode == Mode::lattice || !gamma ? 1 : gamma->dim(); }

  int resolved_j_resolution() const {
    if (j_resolution > 0) return j_resolution;
    return dim() == 3 ? 24 : 512;
  }

  /// The L (or n) grid of a sweep, rounded to integers in lattice mode.
  std::vector<double> grid_points() const {
    const bool integer = mode == Mode::lattice;
    if (!grid.values.empty()) {
      std::vector<double> v = grid.values;
      if (integer)
        for (double& x : v) x = std::round(x);
      return v;
    }
    if (grid.count == 0) return {};
    return geometric_grid(grid.min, grid.max, grid.count, integer);
  }
};

namespace config_detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

inline std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline double plain_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError("not a finite number: '" + s + "'");
  return v;
}

/// "1.5", "pi", "-pi/2", "3*pi/4", "2pi".
inline double number(const std::string& text) {
  std::string s = trim(text);
  const auto at = s.find("pi");
  if (at == std::string::npos) return plain_number(s);
  std::string head = trim(s.substr(0, at));
  std::string tail = trim(s.substr(at + 2));
  double factor = 1.0;
  if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
  if (head == "-") factor = -1.0;
  else if (head == "+" || head.empty()) factor = 1.0;
  else factor = plain_number(head);
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw ConfigError("cannot parse '" + s + "'");
    divisor = plain_number(trim(tail.substr(1)));
    if (divisor == 0.0) throw ConfigError("division by zero in '" + s + "'");
  }
  return factor * std::numbers::pi / divisor;
}

inline std::vector<double> numbers(const std::string& s) {
  std::vector<double> out;
  for (const auto& w : words(s)) out.push_back(number(w));
  return out;
}

/// A flat list separated by commas, blanks or both.
inline std::vector<double> number_list(std::string s) {
  std::replace(s.begin(), s.end(), ',', ' ');
  return numbers(s);
}

/// "a b, c d, ..." as a list of number tuples of a fixed width.
inline std::vector<std::vector<double>> tuples(const std::string& s, std::size_t width) {
  std::vector<std::vector<double>> out;
  for (const auto& part : split(s, ',')) {
    auto t = numbers(part);
    if (t.size() != width)
      throw ConfigError("expected " + std::to_string(width) + " numbers per entry in '" + s + "'");
    out.push_back(std::move(t));
  }
  return out;
}

inline std::uint64_t unsigned_integer(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("not a non-negative integer: '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ConfigError("integer out of range: '" + s + "'");
  }
}

inline std::string num(double v) { return detail::fmt_double(v); }

inline std::string join(const std::vector<double>& v, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + num(v[i]);
  return out;
}

/// Builds a Domain from the collected "<prefix>.*" keys.
inline Domain domain_from(const std::string& prefix, std::map<std::string, std::string>& keys) {
  auto take = [&](const std::string& k) -> std::optional<std::string> {
    auto it = keys.find(prefix + "." + k);
    if (it == keys.end()) return std::nullopt;
    std::string v = it->second;
    keys.erase(it);
    return v;
  };
  auto need = [&](const std::string& k) {
    auto v = take(k);
    if (!v) throw ConfigError(prefix + ": missing key '" + prefix + "." + k + "'");
    return *v;
  };
  const std::string shape = need("shape");
  Domain d = [&] {
    if (shape == "interval") return Domain::interval(number(need("lower")), number(need("upper")));
    if (shape == "intervals") {
      std::vector<Interval> ivs;
      for (const auto& t : tuples(need("intervals"), 2)) ivs.push_back({t[0], t[1]});
      return Domain::interval_union(std::move(ivs));
    }
    if (shape == "box") {
      std::vector<Interval> axes;
      for (const auto& t : tuples(need("axes"), 2)) axes.push_back({t[0], t[1]});
      return Domain::box(std::move(axes));
    }
    if (shape == "cube") {
      const auto dim = unsigned_integer(need("dim"));
      return Domain::cube(static_cast<int>(dim), number(need("lower")), number(need("upper")));
    }
    if (shape == "ball") {
      const double r = number(need("radius"));
      if (auto c = take("center")) {
        if (auto dim = take("dim")) {
          if (unsigned_integer(*dim) != numbers(*c).size())
            throw ConfigError(prefix + ": dim disagrees with the center's length");
        }
        return Domain::ball(numbers(*c), r);
      }
      return Domain::ball(static_cast<int>(unsigned_integer(need("dim"))), r);
    }
    if (shape == "polygon") {
      std::vector<std::array<double, 2>> v;
      for (const auto& t : tuples(need("vertices"), 2)) v.push_back({t[0], t[1]});
      return Domain::polygon(std::move(v));
    }
    throw ConfigError(prefix + ": unknown shape '" + shape + "'");
  }();
  for (const auto& [k, v] : keys)
    if (k.rfind(prefix + ".", 0) == 0) throw ConfigError("key '" + k + "' does not apply to shape '" + shape + "'");
  return d;
}

inline void emit_domain(std::ostream& out, const std::string& prefix, const Domain& d) {
  const Shape& s = d.shape();
  auto pairs = [](const std::vector<Interval>& v) {
    std::string t;
    for (std::size_t i = 0; i < v.size(); ++i) t += (i ? ", " : "") + num(v[i].lo) + " " + num(v[i].hi);
    return t;
  };
  if (auto* u = std::get_if<IntervalUnion>(&s)) {
    out << prefix << ".shape = intervals\n" << prefix << ".intervals = " << pairs(u->intervals) << "\n";
  } else if (auto* b = std::get_if<Box>(&s)) {
    out << prefix << ".shape = box\n" << prefix << ".axes = " << pairs(b->axes) << "\n";
  } else if (auto* ball = std::get_if<Ball>(&s)) {
    out << prefix << ".shape = ball\n"
        << prefix << ".center = " << join(ball->center) << "\n"
        << prefix << ".radius = " << num(ball->radius) << "\n";
  } else {
    const auto& v = std::get<ConvexPolygon>(s).vertices;
    out << prefix << ".shape = polygon\n" << prefix << ".vertices = ";
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << num(v[i][0]) << " " << num(v[i][1]);
    out << "\n";
  }
}

}  // namespace config_detail

/// Checks cross-key invariants; parse_config calls this before returning.
inline void validate_config(const RunConfig& c) {
  if (c.alphas.empty()) throw ConfigError("alpha: at least one order is required");
  if (c.gamma.has_value() != c.omega.has_value())
    throw ConfigError("gamma and omega must be given together");
  if (c.gamma && c.gamma->dim() != c.omega->dim())
    throw ConfigError("gamma and omega have different dimensions");
  if (c.gamma && c.gamma->is<ConvexPolygon>())
    throw ConfigError("gamma: polygonal Fermi seas are not supported (use it as omega)");
  if (c.mode == Mode::tensor_box && c.gamma && !separable(*c.gamma, *c.omega))
    throw ConfigError("mode tensor_box needs box shapes for gamma and omega");
  if (c.mode == Mode::lattice && !(c.k_F > 0.0 && c.k_F < std::numbers::pi))
    throw ConfigError("lattice.k_F must lie in ]0, pi[");
  if (c.L) {
    if (c.mode == Mode::lattice) {
      if (*c.L < 1.0 || *c.L != std::round(*c.L)) throw ConfigError("L: lattice block length must be an integer >= 1");
    } else if (!(*c.L >= 1.0)) {
      throw ConfigError("L must be >= 1");
    }
  }
  if (!c.grid.values.empty() && c.grid.count != 0) throw ConfigError("grid: give either values or min/max/count");
  if (c.grid.values.empty() && c.grid.count != 0) {
    if (c.grid.count < 1) throw ConfigError("grid.count must be positive");
    if (!(c.grid.min > 0.0 && c.grid.max >= c.grid.min)) throw ConfigError("grid: need 0 < min <= max");
  }
  const auto pts = c.grid_points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(pts[i] >= 1.0)) throw ConfigError("grid: every L must be >= 1");
    if (i && !(pts[i] > pts[i - 1])) throw ConfigError("grid: points must be strictly increasing");
    if (c.mode == Mode::lattice && pts[i] > static_cast<double>(c.max_lattice))
      throw ConfigError("grid: block length exceeds budget.max_lattice");
  }
  if (c.nodes_per_unit < 0.0) throw ConfigError("discretization.nodes_per_unit must be >= 0");
  if (!(c.nodes_per_wavelength > 0.0)) throw ConfigError("discretization.nodes_per_wavelength must be positive");
  if (c.fit_min && c.fit_max && *c.fit_min > *c.fit_max) throw ConfigError("fit.min exceeds fit.max");
  if (c.max_nodes == 0 || c.max_lattice == 0) throw ConfigError("budgets must be positive");
  if (!(c.spectral_warn > 0.0 && c.spectral_abort > c.spectral_warn))
    throw ConfigError("spectra: need 0 < warn < abort");
  if (c.j_resolution < 0) throw ConfigError("jcoeff.resolution must be >= 0");
  if (!(c.functional_tol > 0.0)) throw ConfigError("functional.tol must be positive");
}

/// Per-command requirements on top of validate_config.
inline void require_for(const RunConfig& c, Command cmd) {
  const bool geometric = c.mode != Mode::lattice;
  switch (cmd) {
    case Command::entropy:
      if (geometric && !c.gamma) throw ConfigError("entropy: gamma and omega are required");
      if (!c.L) throw ConfigError("entropy: L is required");
      break;
    case Command::sweep:
      if (geometric && !c.gamma) throw ConfigError("sweep: gamma and omega are required");
      if (c.grid.empty()) throw ConfigError("sweep: a grid is required (grid.values or grid.min/max/count)");
      break;
    case Command::jcoeff:
      if (!c.gamma) throw ConfigError("jcoeff: gamma and omega are required");
      break;
    case Command::functional:
    case Command::validate:
      break;
  }
}

inline RunConfig parse_config(std::string_view text) {
  using namespace config_detail;
  std::map<std::string, std::string> keys;
  std::map<std::string, int> line_of;
  std::istringstream in{std::string(text)};
  int lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (val.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    if (keys.contains(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    keys[key] = val;
    line_of[key] = lineno;
  }

  RunConfig c;
  auto take = [&](const std::string& k) -> std::optional<std::string> {
    auto it = keys.find(k);
    if (it == keys.end()) return std::nullopt;
    std::string v = it->second;
    keys.erase(it);
    return v;
  };
  auto at = [&](const std::string& k, auto&& fn) {
    try {
      fn();
    } catch (const InvalidArgument& e) {
      const auto it = line_of.find(k);
      throw ConfigError((it != line_of.end() ? "line " + std::to_string(it->second) + ": " : std::string()) + k +
                        ": " + e.what());
    }
  };

  if (auto v = take("mode")) {
    at("mode", [&] {
      if (*v == "continuum") c.mode = Mode::continuum;
      else if (*v == "lattice") c.mode = Mode::lattice;
      else if (*v == "tensor_box") c.mode = Mode::tensor_box;
      else throw ConfigError("unknown mode '" + *v + "'");
    });
  }
  if (auto v = take("alpha")) {
    at("alpha", [&] {
      c.alphas.clear();
      for (const auto& part : split(*v, ',')) c.alphas.push_back(RenyiOrder::parse(part));
    });
  }
  for (const char* prefix : {"gamma", "omega"}) {
    if (!keys.contains(std::string(prefix) + ".shape")) continue;
    const std::string key = std::string(prefix) + ".shape";
    at(key, [&] { (std::string(prefix) == "gamma" ? c.gamma : c.omega) = domain_from(prefix, keys); });
  }
  if (auto v = take("lattice.k_F")) at("lattice.k_F", [&] { c.k_F = number(*v); });
  if (auto v = take("L")) at("L", [&] { c.L = number(*v); });
  if (auto v = take("grid.values")) at("grid.values", [&] { c.grid.values = number_list(*v); });
  if (auto v = take("grid.min")) at("grid.min", [&] { c.grid.min = number(*v); });
  if (auto v = take("grid.max")) at("grid.max", [&] { c.grid.max = number(*v); });
  if (auto v = take("grid.count")) at("grid.count", [&] { c.grid.count = static_cast<int>(unsigned_integer(*v)); });
  if (auto v = take("discretization.nodes_per_unit"))
    at("discretization.nodes_per_unit", [&] { c.nodes_per_unit = number(*v); });
  if (auto v = take("discretization.nodes_per_wavelength"))
    at("discretization.nodes_per_wavelength", [&] { c.nodes_per_wavelength = number(*v); });
  if (auto v = take("discretization.rule"))
    at("discretization.rule", [&] { c.rule = quadrature::PanelRule::parse(*v); });
  if (auto v = take("discretization.nyquist")) {
    at("discretization.nyquist", [&] {
      if (*v == "reject") c.nyquist = NyquistPolicy::reject;
      else if (*v == "warn") c.nyquist = NyquistPolicy::warn;
      else throw ConfigError("expected reject or warn");
    });
  }
  if (auto v = take("discretization.route")) {
    at("discretization.route", [&] {
      if (*v == "auto") c.route = Route::automatic;
      else if (*v == "direct") c.route = Route::direct;
      else if (*v == "tensor") c.route = Route::tensor;
      else throw ConfigError("expected auto, direct or tensor");
    });
  }
  if (auto v = take("fit.min")) at("fit.min", [&] { c.fit_min = number(*v); });
  if (auto v = take("fit.max")) at("fit.max", [&] { c.fit_max = number(*v); });
  if (auto v = take("fit.weights")) {
    at("fit.weights", [&] {
      if (*v == "unit") c.fit_weights = FitWeights::unit;
      else if (*v == "inverse_area") c.fit_weights = FitWeights::inverse_area;
      else throw ConfigError("expected unit or inverse_area");
    });
  }
  if (auto v = take("budget.max_nodes")) at("budget.max_nodes", [&] { c.max_nodes = unsigned_integer(*v); });
  if (auto v = take("budget.max_lattice")) at("budget.max_lattice", [&] { c.max_lattice = unsigned_integer(*v); });
  if (auto v = take("spectra.warn")) at("spectra.warn", [&] { c.spectral_warn = number(*v); });
  if (auto v = take("spectra.abort")) at("spectra.abort", [&] { c.spectral_abort = number(*v); });
  if (auto v = take("jcoeff.resolution"))
    at("jcoeff.resolution", [&] { c.j_resolution = static_cast<int>(unsigned_integer(*v)); });
  if (auto v = take("jcoeff.mc_samples")) at("jcoeff.mc_samples", [&] { c.mc_samples = unsigned_integer(*v); });
  if (auto v = take("functional.tol")) at("functional.tol", [&] { c.functional_tol = number(*v); });
  if (auto v = take("seed")) at("seed", [&] { c.seed = unsigned_integer(*v); });
  if (auto v = take("output.json")) c.output_json = *v;
  if (auto v = take("output.csv")) c.output_csv = *v;

  if (!keys.empty()) {
    const auto& [k, v] = *keys.begin();
    throw ConfigError("line " + std::to_string(line_of[k]) + ": unknown key '" + k + "'");
  }
  validate_config(c);
  return c;
}

/// Canonical text: every key, fixed order, numbers with 17 significant
/// digits, so that parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& c) {
  using namespace config_detail;
  std::ostringstream out;
  out << "mode = " << to_string(c.mode) << "\n";
  out << "alpha = ";
  for (std::size_t i = 0; i < c.alphas.size(); ++i) out << (i ? ", " : "") << c.alphas[i].to_string();
  out << "\n";
  if (c.gamma) emit_domain(out, "gamma", *c.gamma);
  if (c.omega) emit_domain(out, "omega", *c.omega);
  out << "lattice.k_F = " << num(c.k_F) << "\n";
  if (c.L) out << "L = " << num(*c.L) << "\n";
  if (!c.grid.values.empty()) out << "grid.values = " << join(c.grid.values, ", ") << "\n";
  if (c.grid.count != 0) {
    out << "grid.min = " << num(c.grid.min) << "\n";
    out << "grid.max = " << num(c.grid.max) << "\n";
    out << "grid.count = " << c.grid.count << "\n";
  }
  out << "discretization.nodes_per_unit = " << num(c.nodes_per_unit) << "\n";
  out << "discretization.nodes_per_wavelength = " << num(c.nodes_per_wavelength) << "\n";
  out << "discretization.rule = " << c.rule.id() << "\n";
  out << "discretization.nyquist = " << to_string(c.nyquist) << "\n";
  out << "discretization.route = " << to_string(c.route) << "\n";
  if (c.fit_min) out << "fit.min = " << num(*c.fit_min) << "\n";
  if (c.fit_max) out << "fit.max = " << num(*c.fit_max) << "\n";
  out << "fit.weights = " << to_string(c.fit_weights) << "\n";
  out << "budget.max_nodes = " << c.max_nodes << "\n";
  out << "budget.max_lattice = " << c.max_lattice << "\n";
  out << "spectra.warn = " << num(c.spectral_warn) << "\n";
  out << "spectra.abort = " << num(c.spectral_abort) << "\n";
  out << "jcoeff.resolution = " << c.j_resolution << "\n";
  out << "jcoeff.mc_samples = " << c.mc_samples << "\n";
  out << "functional.tol = " << num(c.functional_tol) << "\n";
  out << "seed = " << c.seed << "\n";
  if (!c.output_json.empty()) out << "output.json = " << c.output_json << "\n";
  if (!c.output_csv.empty()) out << "output.csv = " << c.output_csv << "\n";
  return out.str();
}

/// The canonical text as an ordered key/value map (for JSON echo).
inline std::vector<std::pair<std::string, std::string>> canonical_entries(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(serialize_config(c));
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find(" = ");
    out.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  return out;
}

/// FNV-1a of the canonical text, minus output paths; identifies runs whose
/// partial results may be reused.
inline std::uint64_t config_hash(const RunConfig& c) {
  RunConfig copy = c;
  copy.output_json.clear();
  copy.output_csv.clear();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : serialize_config(copy)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace fermi
