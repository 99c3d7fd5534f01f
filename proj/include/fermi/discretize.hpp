#pragma once

// Finite Hermitian matrices for the localized Fermi projection
// chi_Omega(Q) chi_Gamma(P) chi_Omega(Q): Nystrom discretization on the
// continuum and exact Toeplitz correlation matrices on the 1D lattice.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "fermi/errors.hpp"
#include "fermi/geometry.hpp"
#include "fermi/kernels.hpp"
#include "fermi/quadrature.hpp"

namespace fermi {

enum class NyquistPolicy { reject, warn };

struct DiscretizationConfig {
  /// Quadrature nodes per unit length in position space; 0 selects
  /// `nodes_per_wavelength` nodes per Fermi wavelength 2 pi / p_max.
  double nodes_per_unit = 0.0;
  double nodes_per_wavelength = 12.0;
  quadrature::PanelRule rule{};
  std::size_t max_nodes = 6000;
  NyquistPolicy nyquist = NyquistPolicy::reject;
};

/// Nodes per unit length actually used for a Fermi sea.
inline double resolved_nodes_per_unit(const Domain& gamma, const DiscretizationConfig& cfg) {
  if (cfg.nodes_per_unit > 0.0) return cfg.nodes_per_unit;
  return cfg.nodes_per_wavelength * max_abs_coordinate(gamma) / (2.0 * std::numbers::pi);
}

/// Smallest admissible density: node spacing below pi / (2 p_max).
inline double nyquist_nodes_per_unit(const Domain& gamma) {
  return 2.0 * max_abs_coordinate(gamma) / std::numbers::pi;
}

struct VolumeQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

namespace detail {

inline quadrature::Rule1D axis_rule(const Interval& iv, double npu, int order) {
  return quadrature::composite_gauss_legendre(iv.lo, iv.hi, quadrature::panels_for(iv.length(), npu, order), order);
}

inline std::size_t ceil_count(double x, std::size_t floor_value) {
  return std::max<std::size_t>(floor_value, static_cast<std::size_t>(std::ceil(x - 1e-12)));
}

}  // namespace detail

/// Number of nodes region_quadrature would produce, computed without
/// building the rule (used for budget checks).
inline std::size_t region_node_count(const Domain& domain, double npu, int order) {
  const Shape& s = domain.shape();
  auto axis = [&](const Interval& iv) {
    return static_cast<std::size_t>(quadrature::panels_for(iv.length(), npu, order)) * order;
  };
  if (auto* u = std::get_if<IntervalUnion>(&s)) {
    std::size_t n = 0;
    for (const auto& iv : u->intervals) n += axis(iv);
    return n;
  }
  if (auto* b = std::get_if<Box>(&s)) {
    std::size_t n = 1;
    for (const auto& iv : b->axes) n *= axis(iv);
    return n;
  }
  if (auto* ball = std::get_if<Ball>(&s)) {
    const double r = ball->radius;
    const std::size_t radial = axis({0.0, r});
    if (domain.dim() == 1) return axis({-r, r});
    const std::size_t azimuth = detail::ceil_count(2.0 * std::numbers::pi * r * npu, order);
    if (domain.dim() == 2) return radial * azimuth;
    const std::size_t polar = detail::ceil_count(std::numbers::pi * r * npu, order);
    return radial * polar * azimuth;
  }
  const auto& v = std::get<ConvexPolygon>(s).vertices;
  double cx = 0.0, cy = 0.0;
  for (const auto& p : v) {
    cx += p[0];
    cy += p[1];
  }
  cx /= v.size();
  cy /= v.size();
  std::size_t n = 0;
  for (std::size_t e = 0; e < v.size(); ++e) {
    const auto& a = v[e];
    const auto& b = v[(e + 1) % v.size()];
    const double size = std::max({std::hypot(a[0] - cx, a[1] - cy), std::hypot(b[0] - cx, b[1] - cy),
                                  std::hypot(b[0] - a[0], b[1] - a[1])});
    const std::size_t m = axis({0.0, size});
    n += m * m;
  }
  return n;
}

/// Interior quadrature of a region: composite Gauss-Legendre on intervals
/// and (tensor) boxes, a polar grid with Gauss nodes in radius and uniform
/// angles on balls, collapsed Gauss rules on a centroid fan of triangles for
/// polygons.
inline VolumeQuadrature region_quadrature(const Domain& domain, double npu, int order) {
  if (!(npu > 0.0)) throw InvalidArgument("region_quadrature: nodes_per_unit must be positive");
  VolumeQuadrature q;
  const Shape& s = domain.shape();
  const double two_pi = 2.0 * std::numbers::pi;
  if (auto* u = std::get_if<IntervalUnion>(&s)) {
    for (const auto& iv : u->intervals) {
      const auto r = detail::axis_rule(iv, npu, order);
      for (std::size_t k = 0; k < r.size(); ++k) {
        q.points.push_back({r.nodes[k], 0.0, 0.0});
        q.weights.push_back(r.weights[k]);
      }
    }
    return q;
  }
  if (auto* b = std::get_if<Box>(&s)) {
    std::vector<quadrature::Rule1D> rules;
    for (const auto& iv : b->axes) rules.push_back(detail::axis_rule(iv, npu, order));
    const int d = domain.dim();
    // Row-major over axes, last axis fastest: matches the Kronecker product
    // of the per-axis matrices.
    std::vector<std::size_t> idx(d, 0);
    std::size_t total = 1;
    for (const auto& r : rules) total *= r.size();
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      for (int k = d - 1; k >= 0; --k) {
        idx[k] = rem % rules[k].size();
        rem /= rules[k].size();
      }
      Point p{};
      double w = 1.0;
      for (int k = 0; k < d; ++k) {
        p[k] = rules[k].nodes[idx[k]];
        w *= rules[k].weights[idx[k]];
      }
      q.points.push_back(p);
      q.weights.push_back(w);
    }
    return q;
  }
  if (auto* ball = std::get_if<Ball>(&s)) {
    const double r = ball->radius;
    const int d = domain.dim();
    if (d == 1) {
      return region_quadrature(Domain::interval(ball->center[0] - r, ball->center[0] + r), npu, order);
    }
    const auto radial = detail::axis_rule({0.0, r}, npu, order);
    const std::size_t nphi = detail::ceil_count(two_pi * r * npu, order);
    if (d == 2) {
      for (std::size_t i = 0; i < radial.size(); ++i) {
        const double rr = radial.nodes[i];
        for (std::size_t k = 0; k < nphi; ++k) {
          const double ph = two_pi * (k + 0.5) / nphi;
          q.points.push_back({ball->center[0] + rr * std::cos(ph), ball->center[1] + rr * std::sin(ph), 0.0});
          q.weights.push_back(rr * radial.weights[i] * two_pi / nphi);
        }
      }
      return q;
    }
    const std::size_t npolar = detail::ceil_count(std::numbers::pi * r * npu, order);
    const auto mu = quadrature::gauss_legendre(static_cast<int>(npolar));
    for (std::size_t i = 0; i < radial.size(); ++i) {
      const double rr = radial.nodes[i];
      for (std::size_t j = 0; j < mu.size(); ++j) {
        const double ct = mu.nodes[j];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (std::size_t k = 0; k < nphi; ++k) {
          const double ph = two_pi * (k + 0.5) / nphi;
          q.points.push_back({ball->center[0] + rr * st * std::cos(ph), ball->center[1] + rr * st * std::sin(ph),
                              ball->center[2] + rr * ct});
          q.weights.push_back(rr * rr * radial.weights[i] * mu.weights[j] * two_pi / nphi);
        }
      }
    }
    return q;
  }
  const auto& v = std::get<ConvexPolygon>(s).vertices;
  double cx = 0.0, cy = 0.0;
  for (const auto& p : v) {
    cx += p[0];
    cy += p[1];
  }
  cx /= v.size();
  cy /= v.size();
  for (std::size_t e = 0; e < v.size(); ++e) {
    const auto& a = v[e];
    const auto& b = v[(e + 1) % v.size()];
    const double size = std::max({std::hypot(a[0] - cx, a[1] - cy), std::hypot(b[0] - cx, b[1] - cy),
                                  std::hypot(b[0] - a[0], b[1] - a[1])});
    const auto g = detail::axis_rule({0.0, 1.0}, npu * size, order);
    // (s, t) -> c + s (a - c) + s t (b - a), Jacobian 2 * area * s.
    const double twice_area = (a[0] - cx) * (b[1] - cy) - (a[1] - cy) * (b[0] - cx);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double sv = g.nodes[i];
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double tv = g.nodes[j];
        q.points.push_back({cx + sv * (a[0] - cx) + sv * tv * (b[0] - a[0]),
                            cy + sv * (a[1] - cy) + sv * tv * (b[1] - a[1]), 0.0});
        q.weights.push_back(twice_area * sv * g.weights[i] * g.weights[j]);
      }
    }
  }
  return q;
}

struct OperatorProvenance {
  std::string gamma;
  std::string omega;
  double L = 1.0;
  std::string rule;
  std::size_t n = 0;
  double nodes_per_unit = 0.0;
};

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Nystrom matrix A_jk = sqrt(w_j w_k) K(q_j, q_k) on nodes in L * Omega.
/// Real symmetric when Gamma = -Gamma, complex Hermitian otherwise.
struct DiscretizedOperator {
  std::variant<RealMatrix, ComplexMatrix> matrix;
  std::vector<Point> nodes;
  std::vector<double> weights;
  OperatorProvenance provenance;
  int dim = 1;
  bool nyquist_warning = false;

  std::size_t size() const { return nodes.size(); }
  bool is_real() const { return std::holds_alternative<RealMatrix>(matrix); }

  /// Trace of the matrix, sum_j w_j K(q_j, q_j).
  double trace() const {
    return std::visit([](const auto& m) { return std::real(m.trace()); }, matrix);
  }
};

/// Nystrom discretization of the localized Fermi projection for the
/// dilated region L * Omega. Equivalent to discretizing D(L Gamma, Omega)
/// by unitary dilatation.
inline DiscretizedOperator nystrom(const Domain& gamma, const Domain& omega, double L,
                                   const DiscretizationConfig& cfg = {}) {
  if (gamma.dim() != omega.dim()) throw InvalidArgument("nystrom: Fermi sea and region have different dimensions");
  if (!(L >= 1.0) || !std::isfinite(L)) throw InvalidArgument("nystrom: scaling parameter L must be >= 1");
  const FermiKernel kernel(gamma);
  const double npu = resolved_nodes_per_unit(gamma, cfg);
  if (!(npu > 0.0)) throw InvalidArgument("nystrom: nodes_per_unit must be positive");

  DiscretizedOperator op;
  op.dim = gamma.dim();
  if (npu < nyquist_nodes_per_unit(gamma)) {
    if (cfg.nyquist == NyquistPolicy::reject)
      throw InvalidArgument("nystrom: node spacing exceeds pi/(2 p_max); raise nodes_per_unit");
    op.nyquist_warning = true;
  }
  const Domain region = L == 1.0 ? omega : omega.scaled(L);
  const std::size_t count = region_node_count(region, npu, cfg.rule.order);
  if (count > cfg.max_nodes)
    throw ComputationError("nystrom: " + std::to_string(count) + " nodes exceed the budget of " +
                           std::to_string(cfg.max_nodes));

  auto quad = region_quadrature(region, npu, cfg.rule.order);
  const std::size_t n = quad.size();
  std::vector<double> root(n);
  for (std::size_t j = 0; j < n; ++j) root[j] = std::sqrt(quad.weights[j]);

  if (kernel.is_real()) {
    RealMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = k; j < n; ++j) {
        const double v = root[j] * root[k] * kernel(quad.points[j], quad.points[k]).real();
        m(j, k) = v;
        m(k, j) = v;
      }
    }
    op.matrix = std::move(m);
  } else {
    ComplexMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      m(k, k) = root[k] * root[k] * kernel.diagonal();
      for (std::size_t j = k + 1; j < n; ++j) {
        const cplx v = root[j] * root[k] * kernel(quad.points[j], quad.points[k]);
        m(j, k) = v;
        m(k, j) = std::conj(v);
      }
    }
    op.matrix = std::move(m);
  }
  op.nodes = std::move(quad.points);
  op.weights = std::move(quad.weights);
  op.provenance = {describe(gamma), describe(omega), L, cfg.rule.id(), n, npu};
  return op;
}

/// Ground-state correlation matrix of a block of n successive sites on the
/// infinite 1D lattice: C_jk = sin(k_F (j-k)) / (pi (j-k)), C_jj = k_F / pi.
struct LatticeCorrelation {
  RealMatrix matrix;
  double k_F = std::numbers::pi / 2.0;
  int n = 0;

  std::size_t size() const { return static_cast<std::size_t>(n); }
};

inline LatticeCorrelation lattice_correlation(double k_F, int n) {
  if (!(k_F > 0.0 && k_F < std::numbers::pi)) throw InvalidArgument("lattice_correlation: k_F must lie in ]0, pi[");
  if (n < 1) throw InvalidArgument("lattice_correlation: block length must be >= 1");
  std::vector<double> row(static_cast<std::size_t>(n));
  row[0] = k_F / std::numbers::pi;
  for (int j = 1; j < n; ++j) row[j] = std::sin(k_F * j) / (std::numbers::pi * j);
  LatticeCorrelation c;
  c.k_F = k_F;
  c.n = n;
  c.matrix.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) c.matrix(j, k) = row[static_cast<std::size_t>(std::abs(j - k))];
  return c;
}

/// Correlation matrix (an orthogonal projection) of the finite ring of
/// `sites` sites with the momenta 2 pi m / sites, |m| <= half_width, filled.
inline RealMatrix ring_correlation(int sites, int half_width) {
  if (sites < 1 || half_width < 0 || 2 * half_width + 1 > sites)
    throw InvalidArgument("ring_correlation: need 0 <= 2*half_width+1 <= sites");
  RealMatrix c(sites, sites);
  for (int j = 0; j < sites; ++j) {
    for (int l = 0; l < sites; ++l) {
      double v = 1.0;
      for (int m = 1; m <= half_width; ++m) v += 2.0 * std::cos(2.0 * std::numbers::pi * m * (j - l) / sites);
      c(j, l) = v / sites;
    }
  }
  return c;
}

/// Principal submatrix on the given (0-based) index set.
inline RealMatrix restrict_to(const RealMatrix& m, const std::vector<int>& sites) {
  const auto n = static_cast<Eigen::Index>(sites.size());
  RealMatrix out(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) out(a, b) = m(sites[a], sites[b]);
  return out;
}

// Operator dump files.
//
// Text:   "fermi-operator 1" line, then "n", "d", "field" (real|complex),
//         "gamma", "omega", "L", "rule" header lines, a "data" line, and
//         n rows of row-major entries (complex entries as "re im").
// Binary: 8-byte magic "FERMIOP1", uint64 n, uint32 d, uint32 complex flag,
//         uint64 header length, header text (the text header lines), then
//         n*n row-major doubles (pairs for complex), little-endian host order.

struct OperatorDump {
  std::size_t n = 0;
  int dim = 1;
  bool complex = false;
  OperatorProvenance provenance;
  ComplexMatrix matrix;
};

namespace detail {

inline std::string dump_header(const DiscretizedOperator& op) {
  std::string h;
  h += "gamma " + op.provenance.gamma + "\n";
  h += "omega " + op.provenance.omega + "\n";
  h += "L " + fmt_double(op.provenance.L) + "\n";
  h += "rule " + op.provenance.rule + "\n";
  return h;
}

inline void parse_header_line(const std::string& line, OperatorProvenance& p) {
  const auto sp = line.find(' ');
  if (sp == std::string::npos) throw InvalidArgument("operator dump: malformed header line '" + line + "'");
  const std::string key = line.substr(0, sp);
  const std::string val = line.substr(sp + 1);
  if (key == "gamma") p.gamma = val;
  else if (key == "omega") p.omega = val;
  else if (key == "L") p.L = std::stod(val);
  else if (key == "rule") p.rule = val;
}

inline cplx entry(const DiscretizedOperator& op, std::size_t j, std::size_t k) {
  return std::visit([&](const auto& m) { return cplx(m(j, k)); }, op.matrix);
}

}  // namespace detail

inline void write_operator_text(const DiscretizedOperator& op, std::ostream& out) {
  const std::size_t n = op.size();
  out << "fermi-operator 1\n";
  out << "n " << n << "\n";
  out << "d " << op.dim << "\n";
  out << "field " << (op.is_real() ? "real" : "complex") << "\n";
  out << detail::dump_header(op);
  out << "data\n";
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const cplx v = detail::entry(op, j, k);
      if (k) out << ' ';
      out << detail::fmt_double(v.real());
      if (!op.is_real()) out << ' ' << detail::fmt_double(v.imag());
    }
    out << '\n';
  }
}

inline void write_operator_binary(const DiscretizedOperator& op, std::ostream& out) {
  const std::uint64_t n = op.size();
  const std::uint32_t d = static_cast<std::uint32_t>(op.dim);
  const std::uint32_t complex_flag = op.is_real() ? 0u : 1u;
  const std::string header = detail::dump_header(op);
  const std::uint64_t hlen = header.size();
  out.write("FERMIOP1", 8);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&d), sizeof d);
  out.write(reinterpret_cast<const char*>(&complex_flag), sizeof complex_flag);
  out.write(reinterpret_cast<const char*>(&hlen), sizeof hlen);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const cplx v = detail::entry(op, j, k);
      const double re = v.real();
      out.write(reinterpret_cast<const char*>(&re), sizeof re);
      if (complex_flag) {
        const double im = v.imag();
        out.write(reinterpret_cast<const char*>(&im), sizeof im);
      }
    }
  }
}

/// Reads either dump format, detected from the first bytes.
inline OperatorDump read_operator(std::istream& in) {
  OperatorDump dump;
  char magic[8] = {};
  in.read(magic, 8);
  if (in && std::memcmp(magic, "FERMIOP1", 8) == 0) {
    std::uint64_t n = 0, hlen = 0;
    std::uint32_t d = 0, cf = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    in.read(reinterpret_cast<char*>(&d), sizeof d);
    in.read(reinterpret_cast<char*>(&cf), sizeof cf);
    in.read(reinterpret_cast<char*>(&hlen), sizeof hlen);
    if (!in || hlen > (1u << 20)) throw InvalidArgument("operator dump: truncated binary header");
    std::string header(hlen, '\0');
    in.read(header.data(), static_cast<std::streamsize>(hlen));
    std::size_t pos = 0;
    while (pos < header.size()) {
      const auto end = header.find('\n', pos);
      detail::parse_header_line(header.substr(pos, end - pos), dump.provenance);
      pos = end == std::string::npos ? header.size() : end + 1;
    }
    dump.n = n;
    dump.dim = static_cast<int>(d);
    dump.complex = cf != 0;
    dump.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), sizeof re);
        if (dump.complex) in.read(reinterpret_cast<char*>(&im), sizeof im);
        dump.matrix(j, k) = cplx(re, im);
      }
    }
    if (!in) throw InvalidArgument("operator dump: truncated binary data");
    dump.provenance.n = dump.n;
    return dump;
  }
  in.clear();
  in.seekg(0);
  std::string line;
  std::getline(in, line);
  if (line != "fermi-operator 1") throw InvalidArgument("operator dump: unrecognized format");
  while (std::getline(in, line) && line != "data") {
    const auto sp = line.find(' ');
    const std::string key = line.substr(0, sp);
    const std::string val = sp == std::string::npos ? "" : line.substr(sp + 1);
    if (key == "n") dump.n = std::stoul(val);
    else if (key == "d") dump.dim = std::stoi(val);
    else if (key == "field") dump.complex = val == "complex";
    else detail::parse_header_line(line, dump.provenance);
  }
  dump.matrix.resize(static_cast<Eigen::Index>(dump.n), static_cast<Eigen::Index>(dump.n));
  for (std::size_t j = 0; j < dump.n; ++j) {
    for (std::size_t k = 0; k < dump.n; ++k) {
      double re = 0.0, im = 0.0;
      in >> re;
      if (dump.complex) in >> im;
      dump.matrix(j, k) = cplx(re, im);
    }
  }
  if (!in) throw InvalidArgument("operator dump: truncated text data");
  dump.provenance.n = dump.n;
  return dump;
}

}  // namespace fermi
