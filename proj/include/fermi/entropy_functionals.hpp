#pragma once

// Renyi entropy functions h_alpha, the singular-integral functional
// I(f) = (1/4pi^2) int_0^1 (f(t) - t f(1)) / (t(1-t)) dt, and its closed form
// on h_alpha.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <concepts>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

#include "fermi/errors.hpp"
#include "fermi/quadrature.hpp"
#include "fermi/special.hpp"

namespace fermi {

/// Order alpha in ]0, inf]. alpha = 1 (von Neumann) and alpha = inf
/// (min-entropy) are distinct kinds rather than thresholds on a float.
class RenyiOrder {
 public:
  enum class Kind { finite, one, infinity };

  /// Exactly 1.0 maps to Kind::one and +inf to Kind::infinity.
  explicit RenyiOrder(double alpha) {
    if (std::isnan(alpha) || !(alpha > 0.0)) throw InvalidArgument("Renyi order must be positive");
    if (alpha == 1.0) {
      kind_ = Kind::one;
    } else if (std::isinf(alpha)) {
      kind_ = Kind::infinity;
    }
    value_ = alpha;
  }

  static RenyiOrder one() { return RenyiOrder(1.0); }
  static RenyiOrder infinity() { return RenyiOrder(std::numeric_limits<double>::infinity()); }

  /// Accepts a decimal number, "inf" or "infinity".
  static RenyiOrder parse(std::string_view text) {
    if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
    std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("cannot parse Renyi order '" + s + "'");
    }
    if (used != s.size()) throw InvalidArgument("cannot parse Renyi order '" + s + "'");
    return RenyiOrder(v);
  }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ != Kind::infinity; }
  double value() const { return value_; }

  std::string to_string() const {
    if (kind_ == Kind::infinity) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value_);
    return buf;
  }

  friend bool operator==(const RenyiOrder&, const RenyiOrder&) = default;
  friend auto operator<=>(const RenyiOrder& a, const RenyiOrder& b) { return a.value_ <=> b.value_; }

 private:
  Kind kind_ = Kind::finite;
  double value_ = 1.0;
};

/// h_alpha(t) given t and its complement 1 - t computed separately, which
/// keeps full relative accuracy next to t = 1. Zero outside [0, 1].
inline double renyi_h(const RenyiOrder& alpha, double t, double one_minus_t) {
  if (!(t >= 0.0) || !(one_minus_t >= 0.0)) return 0.0;
  const double small = std::min(t, one_minus_t);
  const double big = std::max(t, one_minus_t);
  if (small == 0.0) return 0.0;
  switch (alpha.kind()) {
    case RenyiOrder::Kind::one:
      return -small * std::log(small) - big * std::log1p(-small);
    case RenyiOrder::Kind::infinity:
      return -std::log1p(-small);
    case RenyiOrder::Kind::finite: {
      const double a = alpha.value();
      // ln(big^a + small^a) = a ln(big) + ln(1 + (small/big)^a)
      const double v = a * std::log1p(-small) + std::log1p(std::pow(small / big, a));
      return v / (1.0 - a);
    }
  }
  return 0.0;
}

/// h_alpha(t) = ln(t^a + (1-t)^a) / (1-a), with the binary entropy at a = 1,
/// -ln max(t, 1-t) at a = inf, and 0 for t outside [0, 1].
inline double renyi_h(const RenyiOrder& alpha, double t) {
  if (!(t >= 0.0 && t <= 1.0)) return 0.0;
  return renyi_h(alpha, t, 1.0 - t);
}

struct FunctionalValue {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
};

/// I(f) = (1/4 pi^2) int_0^1 (f(t) - t f(1)) / (t (1-t)) dt.
///
/// `f` may take `(t)` or `(t, 1 - t)`; the two-argument form receives an
/// accurate complement and should be preferred for functions with a
/// fractional-power singularity at t = 1. Requires f(0) = 0 and an integrable
/// integrand. Throws ConvergenceError when the evaluation budget (tanh-sinh
/// levels) runs out before `tol` is met.
template <typename F>
FunctionalValue I_functional(F&& f, double tol = 1e-12, int max_level = 12) {
  if (!(tol > 0.0)) throw InvalidArgument("I_functional: tolerance must be positive");
  auto call = [&](double t, double s) -> double {
    if constexpr (std::invocable<F&, double, double>) {
      return f(t, s);
    } else {
      return f(t);
    }
  };
  const double f1 = call(1.0, 0.0);
  constexpr double scale = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
  auto integrand = [&](double t, double s) { return call(t, s) - t * f1; };
  const auto r = quadrature::tanh_sinh_unit(integrand, tol / scale, quadrature::UnitMeasure::dt_over_t_one_minus_t,
                                            max_level);
  if (!r.converged || !std::isfinite(r.value))
    throw ConvergenceError("I_functional: no convergence within the evaluation budget (integrand too singular?)");
  return {scale * r.value, scale * r.abs_error_estimate, r.evaluations};
}

/// I(h_alpha) by quadrature for any order, including infinity.
///
/// h_alpha(t) = h_alpha(1 - t) and h_alpha(1) = 0, so the integral folds onto
/// (0, 1/2]; with t = u/2 it becomes int_0^1 4 h(u/2) / (u (2 - u)) du, which
/// is smooth at u = 1 even where h_alpha has a kink at t = 1/2 (alpha = inf).
inline FunctionalValue I_h_numeric(const RenyiOrder& alpha, double tol = 1e-12, int max_level = 12) {
  if (!(tol > 0.0)) throw InvalidArgument("I_h_numeric: tolerance must be positive");
  constexpr double scale = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
  // measure du / (u (1 - u)) absorbs 1/u; s = 1 - u is exact from the rule
  auto integrand = [&](double u, double s) { return 4.0 * renyi_h(alpha, 0.5 * u, 0.5 + 0.5 * s) * s / (1.0 + s); };
  const auto r =
      quadrature::tanh_sinh_unit(integrand, tol / scale, quadrature::UnitMeasure::dt_over_t_one_minus_t, max_level);
  if (!r.converged || !std::isfinite(r.value))
    throw ConvergenceError("I_h_numeric: no convergence within the evaluation budget");
  return {scale * r.value, scale * r.abs_error_estimate, r.evaluations};
}

/// Closed form I(h_alpha) = (1 + alpha) / (24 alpha) for finite alpha.
inline double I_h_closed_form(const RenyiOrder& alpha) {
  if (!alpha.is_finite())
    throw InvalidArgument("I_h_closed_form: alpha = inf is outside the closed form; use kIhInfinityLimit");
  return (1.0 + alpha.value()) / (24.0 * alpha.value());
}

/// lim_{alpha -> inf} (1 + alpha) / (24 alpha).
inline constexpr double kIhInfinityLimit = 1.0 / 24.0;

/// Li(y) := Li2(1 - y), the dilogarithm convention under which
/// Li(y) + (ln y)^2 / 2 -> -pi^2/6 as y -> inf.
inline double shifted_dilog(double y) { return special::dilog(1.0 - y); }

/// I_alpha(x) = int_0^x ds/s [ -alpha ln(1+s) + ln(1+s^alpha) ] written
/// through dilogarithms as alpha Li(1+x) - Li(1+x^alpha) / alpha, taking
/// ln x as input so that x^alpha may exceed the double range.
inline double substitution_integral(double alpha, double log_x) {
  // Li(1 + e^u) = Li2(-e^u)
  return alpha * special::dilog_of_minus_exp(log_x) - special::dilog_of_minus_exp(alpha * log_x) / alpha;
}

/// I(h_alpha) through the substitution s = (1-t)/t and the dilogarithm:
/// (1 / (4 pi^2 (1 - alpha))) I_alpha(x) at x large enough that the
/// remainder ~ ln(x) x^-min(alpha,1) is below double resolution.
inline double I_h_via_dilog(const RenyiOrder& alpha) {
  if (alpha.kind() != RenyiOrder::Kind::finite)
    throw InvalidArgument("I_h_via_dilog: needs finite alpha != 1");
  const double a = alpha.value();
  const double log_x = 40.0 * std::log(10.0) / std::min(a, 1.0);
  return substitution_integral(a, log_x) / (4.0 * std::numbers::pi * std::numbers::pi * (1.0 - a));
}

}  // namespace fermi
