#pragma once

// Special functions used on the kernel and functional paths: the real
// dilogarithm, the Bessel function J1, sinc, and half-integer factorials.

#include <cmath>
#include <numbers>

#include "fermi/errors.hpp"

namespace fermi::special {

/// (z)! = Gamma(z + 1), defined for half-integers and beyond.
inline double factorial(double z) { return std::tgamma(z + 1.0); }

/// sin(x)/x with the removable singularity at 0 taken analytically.
inline double sinc(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

namespace detail {

// Li2 by its defining power series; only called for |x| <= 1/2.
inline double dilog_series(double x) {
  double sum = 0.0;
  double power = x;
  for (int k = 1; k < 200; ++k) {
    const double term = power / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    power *= x;
  }
  return sum;
}

}  // namespace detail

/// Real dilogarithm Li2(x) = -int_0^x ln(1-t)/t dt for x <= 1.
///
/// Uses the power series on [-1/2, 1/2], the reflection
/// Li2(x) + Li2(1-x) = pi^2/6 - ln(x) ln(1-x) on (1/2, 1), Landen's identity on
/// [-1, -1/2) and the inversion identity for x < -1.
inline double dilog(double x) {
  constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  if (std::isnan(x) || x > 1.0) throw InvalidArgument("dilog: argument must satisfy x <= 1");
  if (x == 1.0) return pi2_6;
  if (x > 0.5) return pi2_6 - std::log(x) * std::log1p(-x) - detail::dilog_series(1.0 - x);
  if (x >= -0.5) return detail::dilog_series(x);
  if (x >= -1.0) {
    const double l = std::log1p(-x);
    return -detail::dilog_series(x / (x - 1.0)) - 0.5 * l * l;
  }
  const double l = std::log(-x);
  return -pi2_6 - 0.5 * l * l - dilog(1.0 / x);
}

/// Li2(-e^s) without forming e^s, so arguments far beyond the double range work.
inline double dilog_of_minus_exp(double s) {
  constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  if (s <= 0.0) return dilog(-std::exp(s));
  return -pi2_6 - 0.5 * s * s - dilog(-std::exp(-s));
}

namespace detail {

inline double bessel_j1_series(double x) {
  const double half = 0.5 * x;
  const double q = -half * half;
  double term = half;
  double sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Trapezoid rule on the periodic Bessel integral J1(x) = (1/2pi) int cos(t - x sin t) dt.
// Aliasing error is of order J_{N-1}(x), negligible once N exceeds x by ~30.
inline double bessel_j1_trapezoid(double x) {
  const int n = 2 * (static_cast<int>(std::ceil(x)) / 2 + 18);
  const double h = 2.0 * std::numbers::pi / n;
  // The integrand is even about t = pi, so sum half the period.
  double sum = 0.5 * (std::cos(0.0) + std::cos(std::numbers::pi));
  for (int k = 1; k < n / 2; ++k) {
    const double t = k * h;
    sum += std::cos(t - x * std::sin(t));
  }
  return sum * 2.0 / n;
}

// Hankel asymptotic expansion, truncated at the smallest term.
inline double bessel_j1_asymptotic(double x) {
  constexpr double mu = 4.0;
  const double z = 8.0 * x;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * z);
    const double mag = std::abs(term);
    if (mag > last) break;
    last = mag;
    // k odd feeds Q with sign (-1)^((k-1)/2), k even feeds P with sign (-1)^(k/2).
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    } else {
      p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    }
    if (mag < 1e-17) break;
  }
  const double chi = x - 0.75 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

/// Bessel function of the first kind of order one.
///
/// Power series below 4, periodic trapezoid rule on [4, 20), Hankel
/// asymptotics from 20 on. Agrees with reference values to ~1e-14 absolute.
inline double bessel_j1(double x) {
  if (x < 0.0) return -bessel_j1(-x);
  if (x < 4.0) return detail::bessel_j1_series(x);
  if (x < 20.0) return detail::bessel_j1_trapezoid(x);
  return detail::bessel_j1_asymptotic(x);
}

/// J1(x)/x with the x -> 0 limit 1/2.
inline double bessel_j1_over_x(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-3) {
    const double x2 = x * x;
    return 0.5 - x2 / 16.0 + x2 * x2 / 384.0;
  }
  return bessel_j1(ax) / ax;
}

/// (sin x - x cos x)/x^3, the radial profile of the 3D ball kernel; 1/3 at 0.
inline double spherical_profile(double x) {
  const double ax = std::abs(x);
  if (ax < 0.1) {
    const double x2 = x * x;
    return 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0;
  }
  return (std::sin(ax) - ax * std::cos(ax)) / (ax * ax * ax);
}

}  // namespace fermi::special
