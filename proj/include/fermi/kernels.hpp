#pragma once

// Position-space integral kernel of the Fermi projection chi_Gamma(P):
// K(q, q') = (2 pi)^-d int_Gamma exp(i p . (q - q')) dp, in closed form for
// interval unions, boxes and balls.

#include <complex>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "fermi/errors.hpp"
#include "fermi/geometry.hpp"
#include "fermi/special.hpp"

namespace fermi {

using cplx = std::complex<double>;

/// Anything evaluable like a Fermi kernel. Used to run the structural checks
/// on test doubles as well as on FermiKernel.
template <typename K>
concept KernelLike = requires(const K& k, const Point& q) {
  { k.dim() } -> std::convertible_to<int>;
  { k(q, q) } -> std::convertible_to<cplx>;
};

/// (1/2 pi) int_a^b exp(i p u) dp = exp(i c u) sin(h u) / (pi u), with c the
/// midpoint and h the half width; the u -> 0 limit (b - a)/2pi is exact.
inline cplx interval_kernel(const Interval& iv, double u) {
  const double c = 0.5 * (iv.lo + iv.hi);
  const double h = 0.5 * (iv.hi - iv.lo);
  const double mag = h / std::numbers::pi * special::sinc(h * u);
  if (c == 0.0) return {mag, 0.0};
  return std::polar(1.0, c * u) * mag;
}

class FermiKernel {
 public:
  explicit FermiKernel(Domain gamma) : gamma_(std::move(gamma)) {
    if (gamma_.is<ConvexPolygon>()) throw InvalidArgument("FermiKernel: polygonal Fermi seas are not supported");
    real_ = symmetric_about_origin();
  }

  int dim() const { return gamma_.dim(); }
  const Domain& gamma() const { return gamma_; }

  /// True when Gamma = -Gamma, in which case the kernel is real.
  bool is_real() const { return real_; }

  /// K(q, q) = |Gamma| / (2 pi)^d.
  double diagonal() const { return mean_density(gamma_); }

  cplx operator()(const Point& q, const Point& q2) const { return at_offset(q - q2); }

  /// K as a function of u = q - q'.
  cplx at_offset(const Point& u) const {
    const Shape& s = gamma_.shape();
    if (auto* un = std::get_if<IntervalUnion>(&s)) {
      cplx sum = 0.0;
      for (const auto& iv : un->intervals) sum += interval_kernel(iv, u[0]);
      return sum;
    }
    if (auto* box = std::get_if<Box>(&s)) {
      cplx prod = 1.0;
      for (std::size_t k = 0; k < box->axes.size(); ++k) prod *= interval_kernel(box->axes[k], u[k]);
      return prod;
    }
    const auto& ball = std::get<Ball>(s);
    const int d = dim();
    double r2 = 0.0;
    double phase = 0.0;
    for (int k = 0; k < d; ++k) {
      r2 += u[k] * u[k];
      phase += ball.center[k] * u[k];
    }
    const double pf = ball.radius;
    const double x = pf * std::sqrt(r2);
    double mag = 0.0;
    if (d == 1) {
      mag = pf / std::numbers::pi * special::sinc(x);
    } else if (d == 2) {
      // (p_F / 2 pi r) J1(p_F r) = p_F^2 / (2 pi) * J1(x)/x
      mag = pf * pf / (2.0 * std::numbers::pi) * special::bessel_j1_over_x(x);
    } else {
      // (sin x - x cos x) / (2 pi^2 r^3) = p_F^3 / (2 pi^2) * (sin x - x cos x)/x^3
      mag = pf * pf * pf / (2.0 * std::numbers::pi * std::numbers::pi) * special::spherical_profile(x);
    }
    if (phase == 0.0) return {mag, 0.0};
    return std::polar(1.0, phase) * mag;
  }

 private:
  bool symmetric_about_origin() const {
    const Shape& s = gamma_.shape();
    if (auto* un = std::get_if<IntervalUnion>(&s)) {
      const auto& v = un->intervals;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& mirror = v[v.size() - 1 - i];
        if (v[i].lo != -mirror.hi || v[i].hi != -mirror.lo) return false;
      }
      return true;
    }
    if (auto* box = std::get_if<Box>(&s)) {
      for (const auto& iv : box->axes)
        if (iv.lo != -iv.hi) return false;
      return true;
    }
    for (double c : std::get<Ball>(s).center)
      if (c != 0.0) return false;
    return true;
  }

  Domain gamma_;
  bool real_ = false;
};

/// Evaluates the kernel on the pair list and checks K(q,q') = conj K(q',q).
template <KernelLike K>
bool is_hermitian_sample(const K& kernel, const std::vector<std::pair<Point, Point>>& pairs, double tol = 1e-12) {
  for (const auto& [q, q2] : pairs) {
    const cplx a = kernel(q, q2);
    const cplx b = kernel(q2, q);
    if (!(std::abs(a - std::conj(b)) <= tol)) return false;
  }
  return true;
}

/// Uniform random point pairs in the cube [-extent, extent]^d.
inline std::vector<std::pair<Point, Point>> random_point_pairs(int d, std::size_t count, double extent,
                                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-extent, extent);
  std::vector<std::pair<Point, Point>> out(count);
  for (auto& [a, b] : out) {
    for (int k = 0; k < d; ++k) {
      a[k] = u(rng);
      b[k] = u(rng);
    }
  }
  return out;
}

}  // namespace fermi
