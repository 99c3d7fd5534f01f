#pragma once

// Regions in position or momentum space drawn from a fixed catalog
// (interval unions, boxes, balls, convex polygons) together with their
// volumes, boundary measures and boundary quadratures.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "fermi/errors.hpp"
#include "fermi/quadrature.hpp"

namespace fermi {

/// Point or vector in R^d, d <= 3. Unused trailing components stay zero.
using Point = std::array<double, 3>;

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct IntervalUnion {
  std::vector<Interval> intervals;
  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;
};

/// Axis-aligned box; the number of axes is the dimension.
struct Box {
  std::vector<Interval> axes;
  friend bool operator==(const Box&, const Box&) = default;
};

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
  friend bool operator==(const Ball&, const Ball&) = default;
};

/// Strictly convex polygon in the plane, vertices counter-clockwise.
struct ConvexPolygon {
  std::vector<std::array<double, 2>> vertices;
  friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;
};

using Shape = std::variant<IntervalUnion, Box, Ball, ConvexPolygon>;

/// Flat piece of a polytope boundary.
struct Face {
  double measure = 0.0;
  Point normal{};
};

/// A validated region from the geometry catalog. Construction enforces the
/// shape invariants; instances are immutable values.
class Domain {
 public:
  static Domain interval_union(std::vector<Interval> intervals) {
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    return Domain(IntervalUnion{std::move(intervals)});
  }
  static Domain interval(double lo, double hi) { return interval_union({{lo, hi}}); }
  static Domain box(std::vector<Interval> axes) { return Domain(Box{std::move(axes)}); }
  static Domain cube(int d, double lo, double hi) {
    return box(std::vector<Interval>(static_cast<std::size_t>(d), Interval{lo, hi}));
  }
  static Domain ball(std::vector<double> center, double radius) {
    return Domain(Ball{std::move(center), radius});
  }
  static Domain ball(int d, double radius) {
    return ball(std::vector<double>(static_cast<std::size_t>(d), 0.0), radius);
  }
  static Domain polygon(std::vector<std::array<double, 2>> vertices) {
    return Domain(ConvexPolygon{std::move(vertices)});
  }
  static Domain from_shape(Shape shape) {
    if (auto* u = std::get_if<IntervalUnion>(&shape)) return interval_union(std::move(u->intervals));
    return Domain(std::move(shape));
  }

  int dim() const { return dim_; }
  const Shape& shape() const { return shape_; }

  template <typename T>
  bool is() const { return std::holds_alternative<T>(shape_); }
  template <typename T>
  const T& as() const { return std::get<T>(shape_); }

  bool is_polytope() const { return dim_ >= 2 && (is<Box>() || is<ConvexPolygon>()); }

  /// The dilated region L * domain = {L q : q in domain}.
  Domain scaled(double factor) const {
    if (!(factor > 0.0)) throw InvalidArgument("scale factor must be positive");
    return std::visit(
        [&](const auto& s) -> Domain {
          using T = std::decay_t<decltype(s)>;
          T copy = s;
          if constexpr (std::is_same_v<T, IntervalUnion>) {
            for (auto& iv : copy.intervals) iv = {iv.lo * factor, iv.hi * factor};
          } else if constexpr (std::is_same_v<T, Box>) {
            for (auto& iv : copy.axes) iv = {iv.lo * factor, iv.hi * factor};
          } else if constexpr (std::is_same_v<T, Ball>) {
            for (auto& c : copy.center) c *= factor;
            copy.radius *= factor;
          } else {
            for (auto& v : copy.vertices) v = {v[0] * factor, v[1] * factor};
          }
          return Domain(std::move(copy));
        },
        shape_);
  }

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  explicit Domain(Shape shape) : shape_(std::move(shape)) { dim_ = validate(); }

  int validate() const;

  Shape shape_;
  int dim_ = 0;
};

inline int Domain::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (auto* u = std::get_if<IntervalUnion>(&shape_)) {
    if (u->intervals.empty()) throw InvalidArgument("interval union must contain at least one interval");
    for (std::size_t i = 0; i < u->intervals.size(); ++i) {
      const auto& iv = u->intervals[i];
      if (!finite(iv.lo) || !finite(iv.hi) || !(iv.hi > iv.lo))
        throw InvalidArgument("interval union: every interval needs finite lo < hi");
      if (i > 0 && !(iv.lo > u->intervals[i - 1].hi))
        throw InvalidArgument("interval union: intervals must be pairwise disjoint");
    }
    return 1;
  }
  if (auto* b = std::get_if<Box>(&shape_)) {
    if (b->axes.empty() || b->axes.size() > 3) throw InvalidArgument("box dimension must be 1, 2 or 3");
    for (const auto& iv : b->axes)
      if (!finite(iv.lo) || !finite(iv.hi) || !(iv.hi > iv.lo))
        throw InvalidArgument("box: every side needs finite lo < hi");
    return static_cast<int>(b->axes.size());
  }
  if (auto* ball = std::get_if<Ball>(&shape_)) {
    if (ball->center.empty() || ball->center.size() > 3) throw InvalidArgument("ball dimension must be 1, 2 or 3");
    if (!finite(ball->radius) || !(ball->radius > 0.0)) throw InvalidArgument("ball radius must be positive");
    for (double c : ball->center)
      if (!finite(c)) throw InvalidArgument("ball center must be finite");
    return static_cast<int>(ball->center.size());
  }
  const auto& poly = std::get<ConvexPolygon>(shape_);
  const auto& v = poly.vertices;
  if (v.size() < 3) throw InvalidArgument("polygon needs at least three vertices");
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    const auto& c = v[(i + 2) % v.size()];
    if (!finite(a[0]) || !finite(a[1])) throw InvalidArgument("polygon vertices must be finite");
    const double cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
    if (!(cross > 0.0))
      throw InvalidArgument("polygon must be strictly convex with counter-clockwise vertices");
  }
  // Strict left turns at every vertex still admit self-intersecting stars;
  // a convex polygon turns through exactly 2 pi.
  double turning = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    const auto& c = v[(i + 2) % v.size()];
    const double h1 = std::atan2(b[1] - a[1], b[0] - a[0]);
    const double h2 = std::atan2(c[1] - b[1], c[0] - b[0]);
    double turn = h2 - h1;
    while (turn <= 0.0) turn += 2.0 * std::numbers::pi;
    while (turn > 2.0 * std::numbers::pi) turn -= 2.0 * std::numbers::pi;
    turning += turn;
  }
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-9)
    throw InvalidArgument("polygon must be strictly convex with counter-clockwise vertices");
  return 2;
}

/// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

inline double polygon_area(const ConvexPolygon& poly) {
  const auto& v = poly.vertices;
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    twice += a[0] * b[1] - a[1] * b[0];
  }
  return 0.5 * twice;
}

/// Lebesgue measure of the region (length, area or volume).
inline double volume(const Domain& domain) {
  const Shape& s = domain.shape();
  if (auto* u = std::get_if<IntervalUnion>(&s)) {
    double total = 0.0;
    for (const auto& iv : u->intervals) total += iv.length();
    return total;
  }
  if (auto* b = std::get_if<Box>(&s)) {
    double total = 1.0;
    for (const auto& iv : b->axes) total *= iv.length();
    return total;
  }
  if (auto* ball = std::get_if<Ball>(&s)) return unit_ball_volume(domain.dim()) * std::pow(ball->radius, domain.dim());
  return polygon_area(std::get<ConvexPolygon>(s));
}

/// Mean particle density rho = |Gamma| / (2 pi)^d of a Fermi sea (hbar = 1).
inline double mean_density(const Domain& gamma) {
  return volume(gamma) / std::pow(2.0 * std::numbers::pi, gamma.dim());
}

/// Faces of a box or convex polygon with outward unit normals.
inline std::vector<Face> faces(const Domain& domain) {
  std::vector<Face> out;
  if (domain.is<Box>() && domain.dim() >= 2) {
    const auto& axes = domain.as<Box>().axes;
    const int d = domain.dim();
    for (int k = 0; k < d; ++k) {
      double measure = 1.0;
      for (int j = 0; j < d; ++j)
        if (j != k) measure *= axes[j].length();
      Point plus{};
      plus[k] = 1.0;
      Point minus{};
      minus[k] = -1.0;
      out.push_back({measure, minus});
      out.push_back({measure, plus});
    }
    return out;
  }
  if (domain.is<ConvexPolygon>()) {
    const auto& v = domain.as<ConvexPolygon>().vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto& a = v[i];
      const auto& b = v[(i + 1) % v.size()];
      const double dx = b[0] - a[0];
      const double dy = b[1] - a[1];
      const double len = std::hypot(dx, dy);
      out.push_back({len, Point{dy / len, -dx / len, 0.0}});
    }
    return out;
  }
  throw InvalidArgument("faces: domain is not a polytope of dimension >= 2");
}

/// Boundary measure: number of endpoints for d = 1, perimeter or surface
/// area for d >= 2.
inline double boundary_measure(const Domain& domain) {
  const int d = domain.dim();
  if (d == 1) {
    if (domain.is<IntervalUnion>()) return 2.0 * static_cast<double>(domain.as<IntervalUnion>().intervals.size());
    return 2.0;
  }
  if (domain.is<Ball>()) {
    return d * unit_ball_volume(d) * std::pow(domain.as<Ball>().radius, d - 1);
  }
  double total = 0.0;
  for (const auto& f : faces(domain)) total += f.measure;
  return total;
}

/// Largest |p| over the region; sets the oscillation scale of the kernel.
inline double max_abs_coordinate(const Domain& domain) {
  const Shape& s = domain.shape();
  if (auto* u = std::get_if<IntervalUnion>(&s)) {
    double m = 0.0;
    for (const auto& iv : u->intervals) m = std::max({m, std::abs(iv.lo), std::abs(iv.hi)});
    return m;
  }
  if (auto* b = std::get_if<Box>(&s)) {
    double m = 0.0;
    for (const auto& iv : b->axes) m = std::max({m, std::abs(iv.lo), std::abs(iv.hi)});
    return m;
  }
  if (auto* ball = std::get_if<Ball>(&s)) {
    double c2 = 0.0;
    for (double c : ball->center) c2 += c * c;
    return std::sqrt(c2) + ball->radius;
  }
  double m = 0.0;
  for (const auto& v : std::get<ConvexPolygon>(s).vertices) m = std::max({m, std::abs(v[0]), std::abs(v[1])});
  return m;
}

/// Boundary points with positive weights and outward unit normals.
struct SurfaceQuadrature {
  int dim = 0;
  std::vector<Point> points;
  std::vector<Point> normals;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  double total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

/// Discretizes the boundary measure of a d >= 2 domain.
///
/// Resolution `n` means: n equispaced angles on a circle; n Gauss-Legendre
/// nodes in cos(theta) times 2n equispaced azimuths on a sphere; n
/// Gauss-Legendre nodes per polygon edge or box face side (n x n per face of
/// a 3D box). Corners and edges carry no weight.
inline SurfaceQuadrature surface_quadrature(const Domain& domain, int resolution) {
  const int d = domain.dim();
  if (d < 2) throw InvalidArgument("surface_quadrature: the boundary of a 1D domain is a finite point set");
  if (resolution < 1) throw InvalidArgument("surface_quadrature: resolution must be positive");
  SurfaceQuadrature q;
  q.dim = d;
  const double two_pi = 2.0 * std::numbers::pi;

  if (domain.is<Ball>()) {
    const auto& ball = domain.as<Ball>();
    const double r = ball.radius;
    if (d == 2) {
      for (int k = 0; k < resolution; ++k) {
        const double th = two_pi * k / resolution;
        const Point n{std::cos(th), std::sin(th), 0.0};
        q.points.push_back({ball.center[0] + r * n[0], ball.center[1] + r * n[1], 0.0});
        q.normals.push_back(n);
        q.weights.push_back(two_pi * r / resolution);
      }
      return q;
    }
    const auto mu = quadrature::gauss_legendre(resolution);
    const int nphi = 2 * resolution;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double ct = mu.nodes[i];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int k = 0; k < nphi; ++k) {
        const double ph = two_pi * k / nphi;
        const Point n{st * std::cos(ph), st * std::sin(ph), ct};
        q.points.push_back({ball.center[0] + r * n[0], ball.center[1] + r * n[1], ball.center[2] + r * n[2]});
        q.normals.push_back(n);
        q.weights.push_back(r * r * mu.weights[i] * two_pi / nphi);
      }
    }
    return q;
  }

  const auto gl = quadrature::gauss_legendre(resolution);
  if (domain.is<ConvexPolygon>()) {
    const auto& v = domain.as<ConvexPolygon>().vertices;
    for (std::size_t e = 0; e < v.size(); ++e) {
      const auto& a = v[e];
      const auto& b = v[(e + 1) % v.size()];
      const double dx = b[0] - a[0];
      const double dy = b[1] - a[1];
      const double len = std::hypot(dx, dy);
      const Point n{dy / len, -dx / len, 0.0};
      for (std::size_t k = 0; k < gl.size(); ++k) {
        const double s = 0.5 * (gl.nodes[k] + 1.0);
        q.points.push_back({a[0] + s * dx, a[1] + s * dy, 0.0});
        q.normals.push_back(n);
        q.weights.push_back(0.5 * len * gl.weights[k]);
      }
    }
    return q;
  }

  const auto& axes = domain.as<Box>().axes;
  auto map = [&](int axis, double s) { return axes[axis].lo + 0.5 * (s + 1.0) * axes[axis].length(); };
  for (int k = 0; k < d; ++k) {
    for (int side = 0; side < 2; ++side) {
      Point n{};
      n[k] = side == 0 ? -1.0 : 1.0;
      const double fixed = side == 0 ? axes[k].lo : axes[k].hi;
      std::vector<int> others;
      for (int j = 0; j < d; ++j)
        if (j != k) others.push_back(j);
      if (d == 2) {
        const int j = others[0];
        for (std::size_t a = 0; a < gl.size(); ++a) {
          Point p{};
          p[k] = fixed;
          p[j] = map(j, gl.nodes[a]);
          q.points.push_back(p);
          q.normals.push_back(n);
          q.weights.push_back(0.5 * axes[j].length() * gl.weights[a]);
        }
      } else {
        const int j = others[0];
        const int l = others[1];
        for (std::size_t a = 0; a < gl.size(); ++a) {
          for (std::size_t b = 0; b < gl.size(); ++b) {
            Point p{};
            p[k] = fixed;
            p[j] = map(j, gl.nodes[a]);
            p[l] = map(l, gl.nodes[b]);
            q.points.push_back(p);
            q.normals.push_back(n);
            q.weights.push_back(0.25 * axes[j].length() * axes[l].length() * gl.weights[a] * gl.weights[b]);
          }
        }
      }
    }
  }
  return q;
}

namespace detail {
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

/// Compact, exact textual id of a domain, used in provenance records.
inline std::string describe(const Domain& domain) {
  using detail::fmt_double;
  const Shape& s = domain.shape();
  std::string out;
  if (auto* u = std::get_if<IntervalUnion>(&s)) {
    out = "interval_union(";
    for (std::size_t i = 0; i < u->intervals.size(); ++i) {
      if (i) out += ",";
      out += "[" + fmt_double(u->intervals[i].lo) + "," + fmt_double(u->intervals[i].hi) + "]";
    }
    return out + ")";
  }
  if (auto* b = std::get_if<Box>(&s)) {
    out = "box(";
    for (std::size_t i = 0; i < b->axes.size(); ++i) {
      if (i) out += "x";
      out += "[" + fmt_double(b->axes[i].lo) + "," + fmt_double(b->axes[i].hi) + "]";
    }
    return out + ")";
  }
  if (auto* ball = std::get_if<Ball>(&s)) {
    out = "ball(center=(";
    for (std::size_t i = 0; i < ball->center.size(); ++i) {
      if (i) out += ",";
      out += fmt_double(ball->center[i]);
    }
    return out + "),radius=" + fmt_double(ball->radius) + ")";
  }
  out = "polygon(";
  const auto& v = std::get<ConvexPolygon>(s).vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += "(" + fmt_double(v[i][0]) + "," + fmt_double(v[i][1]) + ")";
  }
  return out + ")";
}

}  // namespace fermi
