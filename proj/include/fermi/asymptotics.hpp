#pragma once

// L-sweeps of S_alpha(Gamma, L Omega), least-squares fits of the scaling
// model a L^(d-1) ln L + b L^(d-1), and the predicted coefficient
// I(h_alpha) J(dGamma, dOmega).

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <concepts>
#include <cmath>
#include <exception>
#include <functional>
#include <future>
#include <limits>
#include <mutex>
#include <optional>
#include <set>
#include <type_traits>
#include <span>
#include <vector>

#include "fermi/entropy_functionals.hpp"
#include "fermi/errors.hpp"
#include "fermi/geometry.hpp"
#include "fermi/spectra.hpp"
#include "fermi/widom.hpp"

namespace fermi {

/// `count` points from lo to hi with constant ratio. With `integer` the
/// points are rounded and duplicates dropped.
inline std::vector<double> geometric_grid(double lo, double hi, int count, bool integer = false) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw InvalidArgument("geometric_grid: need 0 < lo <= hi, count >= 1");
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    double v = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
    if (k == count - 1) v = hi;
    if (integer) v = std::round(v);
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

/// I(h_alpha) J(dGamma, dOmega), the coefficient of L^(d-1) ln L.
inline double predicted_prefactor(const Domain& gamma, const Domain& omega, const RenyiOrder& alpha,
                                  int resolution = 256) {
  if (!alpha.is_finite()) throw InvalidArgument("predicted_prefactor: alpha must be finite");
  return I_h_closed_form(alpha) * widom_J(gamma, omega, resolution).value;
}

struct WidomPrediction {
  double weyl_term = 0.0;  ///< f(1) (2 pi)^-d |Gamma| |Omega| L^d
  double log_term = 0.0;   ///< I(f) J L^(d-1) ln L
};

/// Two-term trace asymptotics of Tr f(D(Gamma, L Omega)) for smooth f with f(0) = 0.
template <typename F>
  requires(!std::same_as<std::remove_cvref_t<F>, RenyiOrder>)
WidomPrediction widom_prediction(F&& f, const Domain& gamma, const Domain& omega, double L, int resolution = 256) {
  const int d = gamma.dim();
  double f1 = 0.0;
  if constexpr (std::invocable<F&, double, double>) {
    f1 = f(1.0, 0.0);
  } else {
    f1 = f(1.0);
  }
  const double I = I_functional(f).value;
  const double J = widom_J(gamma, omega, resolution).value;
  return {f1 * mean_density(gamma) * volume(omega) * std::pow(L, d), I * J * std::pow(L, d - 1) * std::log(L)};
}

/// For f = h_alpha the Weyl term vanishes since h_alpha(1) = 0.
inline WidomPrediction widom_prediction(const RenyiOrder& alpha, const Domain& gamma, const Domain& omega, double L,
                                        int resolution = 256) {
  return {0.0, predicted_prefactor(gamma, omega, alpha, resolution) * std::pow(L, gamma.dim() - 1) * std::log(L)};
}

struct SweepResult {
  std::vector<EntropyResult> rows;  ///< sorted by (alpha, L)
  std::vector<double> L_grid;
  std::vector<RenyiOrder> alphas;
  int dim = 1;

  /// (L, S) pairs for one order.
  std::pair<std::vector<double>, std::vector<double>> series(const RenyiOrder& alpha) const {
    std::vector<double> L, S;
    for (const auto& r : rows) {
      if (r.alpha == alpha) {
        L.push_back(r.L);
        S.push_back(r.S);
      }
    }
    return {L, S};
  }
};

struct SweepOptions {
  unsigned jobs = 1;
  /// Called once per completed grid point, serialized by a mutex.
  std::function<void(double L, const PipelineResult&)> on_point;
  /// Grid points to leave out (already computed by an earlier run).
  std::set<double> skip;
};

namespace detail {

inline void sort_rows(std::vector<EntropyResult>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const EntropyResult& a, const EntropyResult& b) {
    if (a.alpha.value() != b.alpha.value()) return a.alpha.value() < b.alpha.value();
    return a.L < b.L;
  });
}

template <typename Compute>
SweepResult run_sweep(std::span<const double> grid, std::span<const RenyiOrder> alphas, int dim,
                      const SweepOptions& opt, Compute&& compute) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("sweep: L grid must be strictly increasing");
  SweepResult out;
  out.L_grid.assign(grid.begin(), grid.end());
  out.alphas.assign(alphas.begin(), alphas.end());
  out.dim = dim;

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!opt.skip.contains(grid[i])) todo.push_back(i);
  std::vector<std::optional<PipelineResult>> results(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::mutex report;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < todo.size(); t = next++) {
      const std::size_t i = todo[t];
      try {
        auto r = compute(grid[i]);
        std::lock_guard lock(report);
        if (opt.on_point) opt.on_point(grid[i], r);
        results[i] = std::move(r);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(std::max<std::size_t>(1, todo.size()))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::future<void>> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& r : results)
    if (r)
      for (auto& e : r->entropies) out.rows.push_back(std::move(e));
  sort_rows(out.rows);
  return out;
}

}  // namespace detail

/// Runs the entropy pipeline at each L. Points are independent jobs; rows are
/// aggregated in (alpha, L) order whatever the completion order. If a point
/// fails, the others still complete (and reach `on_point`) before the first
/// error is rethrown.
inline SweepResult sweep(const Domain& gamma, const Domain& omega, std::span<const RenyiOrder> alphas,
                         std::span<const double> L_grid, const PipelineConfig& cfg = {}, const SweepOptions& opt = {}) {
  return detail::run_sweep(L_grid, alphas, gamma.dim(), opt,
                           [&](double L) { return entropy_pipeline(gamma, omega, L, alphas, cfg); });
}

/// Lattice sweep over block lengths n (grid values are rounded to integers).
inline SweepResult lattice_sweep(double k_F, std::span<const double> n_grid, std::span<const RenyiOrder> alphas,
                                 std::size_t max_block = 4000, const SpectralThresholds& th = {},
                                 const SweepOptions& opt = {}) {
  for (double n : n_grid)
    if (n < 1.0 || n != std::round(n) || n > static_cast<double>(max_block))
      throw InvalidArgument("lattice_sweep: block lengths must be integers in [1, " + std::to_string(max_block) + "]");
  return detail::run_sweep(n_grid, alphas, 1, opt, [&](double n) {
    return lattice_pipeline(k_F, static_cast<int>(n), alphas, th);
  });
}

struct LinearFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd standard_errors;
  double residual_norm = 0.0;
  double condition_number = 0.0;
};

/// Weighted least squares y ~ X c minimizing sum_i w_i (y_i - (X c)_i)^2.
/// Standard errors use the residual variance with m - p degrees of freedom.
inline LinearFit weighted_least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                        const Eigen::VectorXd& w) {
  const auto m = X.rows();
  const auto p = X.cols();
  if (m < p || y.size() != m || w.size() != m) throw InvalidArgument("weighted_least_squares: shape mismatch");
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXd A = sw.asDiagonal() * X;
  const Eigen::VectorXd b = sw.asDiagonal() * y;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  LinearFit fit;
  fit.condition_number = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(fit.condition_number < 1e12)) throw ComputationError("fit: design matrix is rank deficient");
  fit.coefficients = svd.solve(b);
  const Eigen::VectorXd r = b - A * fit.coefficients;
  fit.residual_norm = r.norm();
  const double dof = static_cast<double>(m - p);
  const double sigma2 = dof > 0 ? r.squaredNorm() / dof : std::numeric_limits<double>::infinity();
  // (A^T A)^-1 = V diag(1/s^2) V^T
  const Eigen::MatrixXd V = svd.matrixV();
  const Eigen::VectorXd inv_s2 = sv.cwiseAbs2().cwiseInverse();
  const Eigen::MatrixXd cov = V * inv_s2.asDiagonal() * V.transpose();
  fit.standard_errors = (sigma2 * cov.diagonal()).cwiseSqrt();
  return fit;
}

enum class FitWeights { unit, inverse_area };

struct ScalingFit {
  int dim = 1;
  double a = 0.0;  ///< coefficient of L^(d-1) ln L
  double b = 0.0;  ///< coefficient of L^(d-1)
  double stderr_a = 0.0;
  double stderr_b = 0.0;
  double L_min = 0.0;
  double L_max = 0.0;
  std::size_t points = 0;
  double residual_norm = 0.0;
  double condition_number = 0.0;
};

/// Fits S(L) ~ a L^(d-1) ln L + b L^(d-1) on points with L in [L_min, L_max].
inline ScalingFit fit_scaling(std::span<const double> L, std::span<const double> S, int d, double L_min,
                              double L_max, FitWeights weights = FitWeights::unit) {
  if (L.size() != S.size()) throw InvalidArgument("fit_scaling: L and S differ in length");
  if (d < 1 || d > 3) throw InvalidArgument("fit_scaling: dimension must be 1, 2 or 3");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < L.size(); ++i)
    if (L[i] >= L_min && L[i] <= L_max) keep.push_back(i);
  if (keep.size() < 4) throw InvalidArgument("fit_scaling: need at least 4 points in the fit window");
  const auto m = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd X(m, 2);
  Eigen::VectorXd y(m), w(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double l = L[keep[i]];
    const double area = std::pow(l, d - 1);
    X(i, 0) = area * std::log(l);
    X(i, 1) = area;
    y(i) = S[keep[i]];
    w(i) = weights == FitWeights::unit ? 1.0 : 1.0 / area;
  }
  const auto lin = weighted_least_squares(X, y, w);
  ScalingFit fit;
  fit.dim = d;
  fit.a = lin.coefficients(0);
  fit.b = lin.coefficients(1);
  fit.stderr_a = lin.standard_errors(0);
  fit.stderr_b = lin.standard_errors(1);
  fit.L_min = L[keep.front()];
  fit.L_max = L[keep.back()];
  fit.points = keep.size();
  fit.residual_norm = lin.residual_norm;
  fit.condition_number = lin.condition_number;
  return fit;
}

inline ScalingFit fit_scaling(const SweepResult& sweep, const RenyiOrder& alpha, double L_min, double L_max,
                              FitWeights weights = FitWeights::unit) {
  const auto [L, S] = sweep.series(alpha);
  return fit_scaling(L, S, sweep.dim, L_min, L_max, weights);
}

/// Least-squares c in y ~ c L^exponent.
inline double fit_power_coefficient(std::span<const double> L, std::span<const double> y, double exponent) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    const double x = std::pow(L[i], exponent);
    num += x * y[i];
    den += x * x;
  }
  if (!(den > 0.0)) throw InvalidArgument("fit_power_coefficient: empty data");
  return num / den;
}

struct TheoryComparison {
  double theory = 0.0;
  double fitted = 0.0;
  double rel_dev = 0.0;
};

inline TheoryComparison compare_theory(const ScalingFit& fit, double theory) {
  if (!(theory != 0.0) || !std::isfinite(theory)) throw InvalidArgument("compare_theory: theory value must be nonzero");
  return {theory, fit.a, std::abs(fit.a - theory) / std::abs(theory)};
}

inline TheoryComparison compare_theory(const ScalingFit& fit, const Domain& gamma, const Domain& omega,
                                       const RenyiOrder& alpha) {
  if (gamma.dim() != fit.dim) throw InvalidArgument("compare_theory: fit dimension differs from geometry");
  return compare_theory(fit, predicted_prefactor(gamma, omega, alpha));
}

}  // namespace fermi
