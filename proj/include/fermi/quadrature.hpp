#pragma once

// One-dimensional quadrature building blocks: Gauss-Legendre rules, composite
// panel rules, and a double-exponential (tanh-sinh) integrator on [0, 1] that
// tolerates integrable endpoint singularities.

#include <cmath>
#include <concepts>
#include <algorithm>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fermi/errors.hpp"

namespace fermi::quadrature {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the three-term Legendre recurrence. Nodes are returned in ascending order.
inline Rule1D gauss_legendre(int order) {
  if (order < 1) throw InvalidArgument("gauss_legendre: order must be positive");
  Rule1D rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  if (order == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
    return rule;
  }
  // Returns (P_n(x), P_n'(x)).
  auto legendre = [order](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, order * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[order - 1 - i] = x;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

/// Composite Gauss-Legendre rule: `panels` equal panels on [a, b], `order`
/// nodes each.
inline Rule1D composite_gauss_legendre(double a, double b, int panels, int order) {
  if (!(b > a)) throw InvalidArgument("composite_gauss_legendre: need a < b");
  if (panels < 1) throw InvalidArgument("composite_gauss_legendre: panels must be positive");
  const Rule1D base = gauss_legendre(order);
  Rule1D rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * order);
  rule.weights.reserve(static_cast<std::size_t>(panels) * order);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    for (int k = 0; k < order; ++k) {
      rule.nodes.push_back(mid + 0.5 * width * base.nodes[k]);
      rule.weights.push_back(0.5 * width * base.weights[k]);
    }
  }
  return rule;
}

/// Number of panels so that an interval of `length` carries at least
/// `nodes_per_unit * length` nodes with `order` nodes per panel.
inline int panels_for(double length, double nodes_per_unit, int order) {
  const double wanted = std::ceil(length * nodes_per_unit / order - 1e-12);
  return std::max(1, static_cast<int>(wanted));
}

/// Identifier of a composite panel rule, written "gl<order>" (e.g. "gl8").
struct PanelRule {
  int order = 8;

  std::string id() const { return "gl" + std::to_string(order); }

  static PanelRule parse(std::string_view text) {
    if (text.size() < 3 || text.substr(0, 2) != "gl")
      throw InvalidArgument("unknown quadrature rule '" + std::string(text) + "' (expected gl<order>)");
    int order = 0;
    for (char c : text.substr(2)) {
      if (c < '0' || c > '9') throw InvalidArgument("bad quadrature rule '" + std::string(text) + "'");
      order = order * 10 + (c - '0');
      if (order > 1000) break;
    }
    if (order < 2 || order > 64) throw InvalidArgument("quadrature rule order must be in [2, 64]");
    return PanelRule{order};
  }

  friend bool operator==(const PanelRule&, const PanelRule&) = default;
};

struct IntegrationResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

/// Measure used by tanh_sinh_unit.
enum class UnitMeasure {
  dt,                      ///< integrate g(t) dt
  dt_over_t_one_minus_t,   ///< integrate g(t) dt / (t (1 - t))
};

/// Tanh-sinh integration over [0, 1].
///
/// The integrand is called as `g(t, 1 - t)` with both arguments computed
/// without cancellation, so functions singular at t = 1 see the true distance
/// to the endpoint. The substitution t = 1 / (1 + exp(-pi sinh x)) has
/// dt/dx = pi cosh(x) t (1 - t), which cancels the 1/(t(1-t)) weight exactly.
/// Step halving stops once two successive levels differ by at most `tol` and
/// the samples near the truncation point |x| = 6.5 carry less than `tol`;
/// a non-decaying tail means the integral was cut off, not converged.
template <typename F>
  requires std::invocable<F&, double, double>
IntegrationResult tanh_sinh_unit(F&& g, double tol, UnitMeasure measure = UnitMeasure::dt,
                                 int max_level = 12) {
  constexpr double x_max = 6.5;
  auto sample = [&](double x) {
    const double u = std::numbers::pi * std::sinh(x);
    const double t = 1.0 / (1.0 + std::exp(-u));
    const double s = 1.0 / (1.0 + std::exp(u));
    double jac = std::numbers::pi * std::cosh(x);
    if (measure == UnitMeasure::dt) {
      jac *= t * s;
      if (jac == 0.0) return 0.0;
    }
    return g(t, s) * jac;
  };

  IntegrationResult result;
  double h = 0.5;
  const int base_count = static_cast<int>(x_max / h);
  double sum = sample(0.0);
  double tail = 0.0;
  result.evaluations = 1;
  for (int k = 1; k <= base_count; ++k) {
    const double right = sample(k * h);
    const double left = sample(-k * h);
    sum += right + left;
    if (k * h >= x_max - 1.0) tail += h * (std::abs(right) + std::abs(left));
    result.evaluations += 2;
  }
  double estimate = h * sum;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    const int count = static_cast<int>(x_max / h);
    double fresh = 0.0;
    for (int k = 1; k <= count; k += 2) {
      fresh += sample(k * h) + sample(-k * h);
      result.evaluations += 2;
    }
    sum += fresh;
    const double next = h * sum;
    result.abs_error_estimate = std::max(std::abs(next - estimate), tail);
    estimate = next;
    if (level >= 3 && result.abs_error_estimate <= tol) {
      result.converged = true;
      break;
    }
  }
  result.value = estimate;
  return result;
}

}  // namespace fermi::quadrature
