#pragma once

// Dense Hermitian eigensolution with clamping to [0, 1], spectral Renyi
// entropies S_alpha = sum_i h_alpha(lambda_i), and the composition of
// separable (box x box) spectra.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "fermi/discretize.hpp"
#include "fermi/entropy_functionals.hpp"
#include "fermi/errors.hpp"

namespace fermi {

struct SpectralThresholds {
  double warn = 1e-7;   ///< max_violation at or above this sets Spectrum::warning
  double abort = 1e-3;  ///< max_violation at or above this throws
  double hermitian_tol = 1e-13;
};

struct SpectrumSource {
  std::string gamma;
  std::string omega;
  double L = 1.0;
  std::size_t n = 0;
  std::string rule;
};

/// Eigenvalues clamped to [0, 1], ascending, with clamping bookkeeping.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::size_t clamp_count = 0;
  double max_violation = 0.0;
  bool warning = false;
  SpectrumSource source;

  std::size_t size() const { return eigenvalues.size(); }
};

/// Clamps raw eigenvalues into [0, 1] and records how far outside they were.
inline Spectrum clamp_spectrum(std::vector<double> raw, const SpectralThresholds& th = {}) {
  Spectrum s;
  for (double& v : raw) {
    if (!std::isfinite(v)) throw ComputationError("eigensolver returned a non-finite eigenvalue");
    const double violation = std::max(-v, v - 1.0);
    if (violation > 0.0) {
      ++s.clamp_count;
      s.max_violation = std::max(s.max_violation, violation);
      v = std::clamp(v, 0.0, 1.0);
    }
  }
  if (s.max_violation >= th.abort)
    throw ComputationError("spectrum leaves [0,1] by " + detail::fmt_double(s.max_violation) +
                           " (discretization under-resolved)");
  s.warning = s.max_violation >= th.warn;
  std::sort(raw.begin(), raw.end());
  s.eigenvalues = std::move(raw);
  return s;
}

namespace detail {

template <typename Matrix>
double hermitian_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Matrix>
std::vector<double> hermitian_eigenvalues(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw InvalidArgument("eigenvalues: matrix must be square");
  if (m.rows() == 0) return {};
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (hermitian_defect(m) > tol * scale) throw InvalidArgument("eigenvalues: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ComputationError("eigenvalues: Hermitian eigensolver failed");
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

}  // namespace detail

inline Spectrum eigenvalues(const RealMatrix& m, const SpectralThresholds& th = {}) {
  auto s = clamp_spectrum(detail::hermitian_eigenvalues(m, th.hermitian_tol), th);
  s.source.n = s.size();
  return s;
}

inline Spectrum eigenvalues(const ComplexMatrix& m, const SpectralThresholds& th = {}) {
  auto s = clamp_spectrum(detail::hermitian_eigenvalues(m, th.hermitian_tol), th);
  s.source.n = s.size();
  return s;
}

inline Spectrum eigenvalues(const DiscretizedOperator& op, const SpectralThresholds& th = {}) {
  auto s = std::visit([&](const auto& m) { return eigenvalues(m, th); }, op.matrix);
  const auto& p = op.provenance;
  s.source = {p.gamma, p.omega, p.L, p.n, p.rule};
  return s;
}

inline Spectrum eigenvalues(const LatticeCorrelation& c, const SpectralThresholds& th = {}) {
  auto s = eigenvalues(c.matrix, th);
  s.source = {"lattice_fermi_sea(k_F=" + detail::fmt_double(c.k_F) + ")", "lattice_block", static_cast<double>(c.n),
              c.size(), "exact"};
  return s;
}

/// Spectrum of A (x) B from the spectra of A and B: all products lambda_i mu_j.
inline Spectrum tensor_spectrum(const Spectrum& a, const Spectrum& b) {
  Spectrum out;
  out.eigenvalues.reserve(a.size() * b.size());
  for (double x : a.eigenvalues)
    for (double y : b.eigenvalues) out.eigenvalues.push_back(x * y);
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  // products with at least one clamped factor
  out.clamp_count = a.clamp_count * b.size() + b.clamp_count * a.size() - a.clamp_count * b.clamp_count;
  out.max_violation = std::max(a.max_violation, b.max_violation);
  out.warning = a.warning || b.warning;
  out.source = a.source;
  out.source.n = out.size();
  return out;
}

/// sum_i [lambda_i (1 - lambda_i)]^gamma, a growth diagnostic for the
/// non-projector part of the spectrum.
inline double trace_power_diagnostic(const Spectrum& s, double gamma_exponent) {
  if (!(gamma_exponent > 0.0 && gamma_exponent <= 1.0))
    throw InvalidArgument("trace_power_diagnostic: exponent must lie in ]0, 1]");
  double sum = 0.0;
  for (double v : s.eigenvalues) {
    const double x = v * (1.0 - v);
    if (x > 0.0) sum += std::pow(x, gamma_exponent);
  }
  return sum;
}

template <typename Op>
double trace_power_diagnostic(const Op& op, double gamma_exponent, const SpectralThresholds& th = {}) {
  return trace_power_diagnostic(eigenvalues(op, th), gamma_exponent);
}

/// Eigenvalues this close to 0 or 1 contribute nothing to S_alpha.
inline constexpr double kSpectralZero = 1e-14;

/// sum_i h_alpha(lambda_i) in ascending eigenvalue order with compensated
/// summation.
inline double spectral_entropy(std::span<const double> eigenvalues, const RenyiOrder& alpha) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : eigenvalues) {
    if (v <= kSpectralZero || v >= 1.0 - kSpectralZero) continue;
    const double term = renyi_h(alpha, v);
    const double t = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + carry;
}

struct EntropyResult {
  RenyiOrder alpha = RenyiOrder::one();
  double L = 1.0;
  double S = 0.0;
  SpectrumSource provenance;
  std::size_t clamp_count = 0;
  double max_violation = 0.0;
  double wall_time_s = 0.0;
};

inline EntropyResult renyi_entropy(const Spectrum& s, const RenyiOrder& alpha) {
  EntropyResult r;
  r.alpha = alpha;
  r.L = s.source.L;
  r.S = spectral_entropy(s.eigenvalues, alpha);
  r.provenance = s.source;
  r.clamp_count = s.clamp_count;
  r.max_violation = s.max_violation;
  return r;
}

enum class Route {
  automatic,  ///< separable route for box x box with d >= 2, direct otherwise
  direct,
  tensor,
};

struct PipelineConfig {
  DiscretizationConfig discretization{};
  SpectralThresholds thresholds{};
  Route route = Route::automatic;
};

struct PipelineResult {
  Spectrum spectrum;
  std::vector<EntropyResult> entropies;
  bool nyquist_warning = false;
  double wall_time_s = 0.0;
};

inline bool separable(const Domain& gamma, const Domain& omega) {
  return gamma.is<Box>() && omega.is<Box>() && gamma.dim() == omega.dim();
}

/// Spectrum of the discretized localized Fermi projection on L * Omega.
inline Spectrum localized_spectrum(const Domain& gamma, const Domain& omega, double L, const PipelineConfig& cfg,
                                   bool* nyquist_warning = nullptr) {
  const bool use_tensor = cfg.route == Route::tensor || (cfg.route == Route::automatic && separable(gamma, omega) &&
                                                         gamma.dim() >= 2);
  if (!use_tensor) {
    const auto op = nystrom(gamma, omega, L, cfg.discretization);
    if (nyquist_warning) *nyquist_warning = op.nyquist_warning;
    return eigenvalues(op, cfg.thresholds);
  }
  if (!separable(gamma, omega)) throw InvalidArgument("tensor route needs a box Fermi sea and a box region");
  // Each axis is its own 1D problem at the node density the full box would use.
  DiscretizationConfig axis_cfg = cfg.discretization;
  axis_cfg.nodes_per_unit = resolved_nodes_per_unit(gamma, cfg.discretization);
  const auto& ga = gamma.as<Box>().axes;
  const auto& oa = omega.as<Box>().axes;
  Spectrum total;
  bool warned = false;
  for (std::size_t k = 0; k < ga.size(); ++k) {
    const auto op = nystrom(Domain::interval(ga[k].lo, ga[k].hi), Domain::interval(oa[k].lo, oa[k].hi), L, axis_cfg);
    warned = warned || op.nyquist_warning;
    const auto s = eigenvalues(op, cfg.thresholds);
    total = k == 0 ? s : tensor_spectrum(total, s);
  }
  if (nyquist_warning) *nyquist_warning = warned;
  total.source.gamma = describe(gamma);
  total.source.omega = describe(omega);
  total.source.rule = "tensor:" + cfg.discretization.rule.id();
  return total;
}

/// S_alpha(Gamma, L Omega) for each requested order from one eigensolve.
inline PipelineResult entropy_pipeline(const Domain& gamma, const Domain& omega, double L,
                                       std::span<const RenyiOrder> alphas, const PipelineConfig& cfg = {}) {
  const auto start = std::chrono::steady_clock::now();
  PipelineResult out;
  out.spectrum = localized_spectrum(gamma, omega, L, cfg, &out.nyquist_warning);
  for (const auto& a : alphas) out.entropies.push_back(renyi_entropy(out.spectrum, a));
  out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& e : out.entropies) e.wall_time_s = out.wall_time_s;
  return out;
}

inline EntropyResult entropy_pipeline(const Domain& gamma, const Domain& omega, double L, const RenyiOrder& alpha,
                                      const PipelineConfig& cfg = {}) {
  return entropy_pipeline(gamma, omega, L, std::span<const RenyiOrder>(&alpha, 1), cfg).entropies.front();
}

/// Lattice counterpart: block of n sites, Fermi momentum k_F.
inline PipelineResult lattice_pipeline(double k_F, int n, std::span<const RenyiOrder> alphas,
                                       const SpectralThresholds& th = {}) {
  const auto start = std::chrono::steady_clock::now();
  PipelineResult out;
  out.spectrum = eigenvalues(lattice_correlation(k_F, n), th);
  for (const auto& a : alphas) out.entropies.push_back(renyi_entropy(out.spectrum, a));
  out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& e : out.entropies) e.wall_time_s = out.wall_time_s;
  return out;
}

}  // namespace fermi
