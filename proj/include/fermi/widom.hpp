#pragma once

// The Widom coefficient J(dGamma, dOmega): the cosine-transform double
// surface integral of |m(p) . n(q)| over the Fermi surface and the region
// boundary, scaled by (2 pi)^(1-d), plus its closed forms for spherical
// Fermi surfaces.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fermi/errors.hpp"
#include "fermi/geometry.hpp"
#include "fermi/special.hpp"

namespace fermi {

enum class JMethod { closed_form, face_pair_exact, quadrature, monte_carlo };

inline std::string to_string(JMethod m) {
  switch (m) {
    case JMethod::closed_form: return "closed_form";
    case JMethod::face_pair_exact: return "face_pair_exact";
    case JMethod::quadrature: return "quadrature";
    case JMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

struct WidomCoefficient {
  double value = 0.0;
  JMethod method = JMethod::quadrature;
  double error_estimate = 0.0;
};

/// Which evaluation route widom_J should take.
enum class JRoute {
  automatic,  ///< exact for d = 1 and polytope pairs, product quadrature otherwise
  face_pair,
  quadrature,
};

inline double cosine_transform_scale(int d) { return std::pow(2.0 * std::numbers::pi, 1 - d); }

/// Closed form for a spherical Fermi surface of radius p_F:
/// J = 2 / ((d-1)/2)! * (p_F^2 / 4 pi)^((d-1)/2) * |dOmega|.
inline double widom_J_sphere(double p_F, double omega_boundary_measure, int d) {
  if (d < 1 || d > 3) throw InvalidArgument("widom_J_sphere: dimension must be 1, 2 or 3");
  if (!(p_F > 0.0) || !(omega_boundary_measure > 0.0))
    throw InvalidArgument("widom_J_sphere: p_F and |dOmega| must be positive");
  const double e = 0.5 * (d - 1);
  return 2.0 / special::factorial(e) * std::pow(p_F * p_F / (4.0 * std::numbers::pi), e) * omega_boundary_measure;
}

/// Density form of the spherical closed form:
/// J = 2 / ((d-1)/2)! * [(d/2)!]^((d-1)/d) * rho^((d-1)/d) |dOmega|.
inline double widom_J_density_form(const Domain& gamma, const Domain& omega) {
  if (!gamma.is<Ball>()) throw InvalidArgument("widom_J_density_form: Fermi sea must be a ball");
  if (gamma.dim() != omega.dim()) throw InvalidArgument("widom_J_density_form: dimension mismatch");
  const int d = gamma.dim();
  const double e = static_cast<double>(d - 1) / d;
  const double rho = mean_density(gamma);
  return 2.0 / special::factorial(0.5 * (d - 1)) * std::pow(special::factorial(0.5 * d), e) * std::pow(rho, e) *
         boundary_measure(omega);
}

/// Exact J for two polytopes: (2 pi)^(1-d) sum_{F,G} |F| |G| |m_F . n_G|.
inline double widom_J_face_pair(const Domain& gamma, const Domain& omega) {
  if (gamma.dim() != omega.dim()) throw InvalidArgument("widom_J: dimension mismatch");
  if (!gamma.is_polytope() || !omega.is_polytope())
    throw InvalidArgument("widom_J: face-pair summation needs two polytopes");
  double raw = 0.0;
  const auto fg = faces(gamma);
  const auto fo = faces(omega);
  for (const auto& f : fg)
    for (const auto& g : fo) raw += f.measure * g.measure * std::abs(dot(f.normal, g.normal));
  return cosine_transform_scale(gamma.dim()) * raw;
}

/// Raw double sum sum_j sum_k w_j w_k |m_j . n_k| over two surface rules.
/// Rows are summed independently and then combined in row order, so the
/// result does not depend on `jobs`.
inline double surface_pair_sum(const SurfaceQuadrature& a, const SurfaceQuadrature& b, unsigned jobs = 1) {
  std::vector<double> rows(a.size(), 0.0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      double row = 0.0;
      for (std::size_t k = 0; k < b.size(); ++k) row += b.weights[k] * std::abs(dot(a.normals[j], b.normals[k]));
      rows[j] = a.weights[j] * row;
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, a.size()))));
  if (jobs == 1) {
    work(0, a.size());
  } else {
    std::vector<std::future<void>> pending;
    const std::size_t chunk = (a.size() + jobs - 1) / jobs;
    for (std::size_t begin = 0; begin < a.size(); begin += chunk)
      pending.push_back(std::async(std::launch::async, work, begin, std::min(a.size(), begin + chunk)));
    for (auto& f : pending) f.get();
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

/// J by product quadrature of both boundaries at the given resolution. The
/// error estimate is the change from half the resolution.
inline WidomCoefficient widom_J_quadrature(const Domain& gamma, const Domain& omega, int resolution,
                                           unsigned jobs = 1) {
  if (gamma.dim() != omega.dim()) throw InvalidArgument("widom_J: dimension mismatch");
  if (gamma.dim() < 2) throw InvalidArgument("widom_J_quadrature: needs d >= 2");
  const double scale = cosine_transform_scale(gamma.dim());
  auto at = [&](int n) {
    return scale * surface_pair_sum(surface_quadrature(gamma, n), surface_quadrature(omega, n), jobs);
  };
  const double fine = at(resolution);
  const int coarse_n = std::max(gamma.dim() == 2 ? 3 : 1, resolution / 2);
  const double coarse = coarse_n == resolution ? fine : at(coarse_n);
  return {fine, JMethod::quadrature, std::abs(fine - coarse)};
}

/// J(dGamma, dOmega). For d = 1 this is the product of the endpoint counts;
/// for d >= 2 the double surface integral, evaluated exactly for polytope
/// pairs and by product quadrature otherwise.
inline WidomCoefficient widom_J(const Domain& gamma, const Domain& omega, int resolution = 256,
                                JRoute route = JRoute::automatic, unsigned jobs = 1) {
  if (gamma.dim() != omega.dim())
    throw InvalidArgument("widom_J: Fermi sea and region have different dimensions");
  if (gamma.dim() == 1) return {boundary_measure(gamma) * boundary_measure(omega), JMethod::closed_form, 0.0};
  const bool polytopes = gamma.is_polytope() && omega.is_polytope();
  if (route == JRoute::face_pair || (route == JRoute::automatic && polytopes))
    return {widom_J_face_pair(gamma, omega), JMethod::face_pair_exact, 0.0};
  return widom_J_quadrature(gamma, omega, resolution, jobs);
}

struct BoundarySample {
  Point point{};
  Point normal{};
};

/// Draws a point uniformly (with respect to surface measure) from the boundary.
template <typename Rng>
BoundarySample sample_boundary(const Domain& domain, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int d = domain.dim();
  if (d < 2) throw InvalidArgument("sample_boundary: needs d >= 2");
  if (domain.is<Ball>()) {
    const auto& ball = domain.as<Ball>();
    Point n{};
    if (d == 2) {
      const double th = 2.0 * std::numbers::pi * unit(rng);
      n = {std::cos(th), std::sin(th), 0.0};
    } else {
      const double ct = 2.0 * unit(rng) - 1.0;
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      const double ph = 2.0 * std::numbers::pi * unit(rng);
      n = {st * std::cos(ph), st * std::sin(ph), ct};
    }
    Point p{};
    for (int i = 0; i < d; ++i) p[i] = ball.center[i] + ball.radius * n[i];
    return {p, n};
  }
  // Polytopes: pick a face proportionally to its measure. Only the normal
  // enters J, so the in-face position is drawn but otherwise irrelevant.
  const auto fs = faces(domain);
  double total = 0.0;
  for (const auto& f : fs) total += f.measure;
  double pick = unit(rng) * total;
  std::size_t idx = 0;
  while (idx + 1 < fs.size() && pick >= fs[idx].measure) {
    pick -= fs[idx].measure;
    ++idx;
  }
  BoundarySample s;
  s.normal = fs[idx].normal;
  s.point[0] = unit(rng);
  return s;
}

/// Monte Carlo estimate of J from independent uniform boundary samples; the
/// error estimate is one standard error. Intended as an independent oracle.
inline WidomCoefficient widom_J_monte_carlo(const Domain& gamma, const Domain& omega, std::size_t samples,
                                            std::uint64_t seed) {
  if (gamma.dim() != omega.dim()) throw InvalidArgument("widom_J: dimension mismatch");
  if (samples < 2) throw InvalidArgument("widom_J_monte_carlo: need at least two samples");
  std::mt19937_64 rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto a = sample_boundary(gamma, rng);
    const auto b = sample_boundary(omega, rng);
    const double x = std::abs(dot(a.normal, b.normal));
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  const double scale = cosine_transform_scale(gamma.dim()) * boundary_measure(gamma) * boundary_measure(omega);
  return {scale * mean, JMethod::monte_carlo, scale * std::sqrt(var / static_cast<double>(samples))};
}

}  // namespace fermi
