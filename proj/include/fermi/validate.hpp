#pragma once

// Self-contained invariant suite behind `fermi validate`: each check is a
// small computation with an independent reference, timed and reported by name.

#include <Eigen/QR>

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fermi/asymptotics.hpp"
#include "fermi/discretize.hpp"
#include "fermi/entropy_functionals.hpp"
#include "fermi/kernels.hpp"
#include "fermi/spectra.hpp"
#include "fermi/widom.hpp"

namespace fermi {

struct CheckResult {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  std::vector<std::string> failed() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.passed) out.push_back(c.name);
    return out;
  }
};

/// Deliberate defects for exercising the failure path.
enum class Fault { none, corrupted_kernel };

namespace validate_detail {

/// Adds a term odd in q alone; breaks K(q,q') = conj K(q',q).
struct CorruptedKernel {
  FermiKernel base;
  int dim() const { return base.dim(); }
  cplx operator()(const Point& q, const Point& q2) const { return base(q, q2) + cplx(0.0, 1e-3 * q[0]); }
};

/// (2 pi)^-d int_Gamma exp(i p.u) dp by product Gauss-Legendre quadrature.
inline cplx fourier_by_quadrature(const Domain& gamma, const Point& u) {
  const int d = gamma.dim();
  const double norm = std::pow(2.0 * std::numbers::pi, -d);
  auto rule = [](double a, double b) { return quadrature::composite_gauss_legendre(a, b, 40, 10); };
  auto line = [&](double a, double b, double x) {
    const auto r = rule(a, b);
    cplx s = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) s += r.weights[k] * std::polar(1.0, r.nodes[k] * x);
    return s;
  };
  if (gamma.is<IntervalUnion>()) {
    cplx s = 0.0;
    for (const auto& iv : gamma.as<IntervalUnion>().intervals) s += line(iv.lo, iv.hi, u[0]);
    return norm * s;
  }
  if (gamma.is<Box>()) {
    cplx s = 1.0;
    const auto& axes = gamma.as<Box>().axes;
    for (int k = 0; k < d; ++k) s *= line(axes[k].lo, axes[k].hi, u[k]);
    return norm * s;
  }
  // disk: for each radius, the angular integral by the periodic trapezoid rule
  const auto& ball = gamma.as<Ball>();
  const auto rad = rule(0.0, ball.radius);
  const int nphi = 400;
  cplx s = 0.0;
  for (std::size_t i = 0; i < rad.size(); ++i) {
    for (int k = 0; k < nphi; ++k) {
      const double ph = 2.0 * std::numbers::pi * k / nphi;
      const double r = rad.nodes[i];
      const double arg = (ball.center[0] + r * std::cos(ph)) * u[0] + (ball.center[1] + r * std::sin(ph)) * u[1];
      s += rad.weights[i] * r * (2.0 * std::numbers::pi / nphi) * std::polar(1.0, arg);
    }
  }
  return norm * s;
}

inline RealMatrix random_projection(int n, int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, rank);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < rank; ++k) a(j, k) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, rank);
  return q * q.transpose();
}

inline std::vector<Domain> kernel_catalog() {
  return {Domain::interval(-1, 1),
          Domain::interval(0, 2),
          Domain::interval_union({{-2.0, -1.0}, {0.5, 1.5}}),
          Domain::box({{-1, 1}, {-0.5, 0.5}}),
          Domain::box({{0, 1}, {-0.3, 0.9}}),
          Domain::ball(2, 1.0),
          Domain::ball({0.4, -0.1}, 0.8)};
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace validate_detail

/// Runs every check; never throws for a failing check (exceptions inside a
/// check count as a failure with the message as detail).
inline ValidationReport run_validation(Fault fault = Fault::none, std::uint64_t seed = 1) {
  using namespace validate_detail;
  ValidationReport report;
  auto run = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult c;
    c.name = name;
    try {
      auto [ok, detail] = body();
      c.passed = ok;
      c.detail = detail;
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = std::string("exception: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.checks.push_back(std::move(c));
  };
  const double pi = std::numbers::pi;

  run("kernel_hermiticity", [&]() -> std::pair<bool, std::string> {
    for (const auto& g : kernel_catalog()) {
      const auto pairs = random_point_pairs(g.dim(), 200, 8.0, seed);
      const bool ok = fault == Fault::corrupted_kernel ? is_hermitian_sample(CorruptedKernel{FermiKernel(g)}, pairs)
                                                       : is_hermitian_sample(FermiKernel(g), pairs);
      if (!ok) return {false, "K(q,q') != conj K(q',q) for " + describe(g)};
    }
    return {true, "tol 1e-12"};
  });

  run("kernel_fourier_consistency", [&]() -> std::pair<bool, std::string> {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-6.0, 6.0);
    double worst = 0.0;
    for (const auto& g : kernel_catalog()) {
      const FermiKernel k(g);
      for (int s = 0; s < 20; ++s) {
        Point u{};
        for (int j = 0; j < g.dim(); ++j) u[j] = U(rng);
        worst = std::max(worst, std::abs(k.at_offset(u) - fourier_by_quadrature(g, u)));
      }
    }
    return {worst < 1e-8, "max deviation " + fmt(worst)};
  });

  run("nystrom_hermitian", [&]() -> std::pair<bool, std::string> {
    double worst = 0.0;
    for (const auto& g : {Domain::interval(0, 2), Domain::box({{0, 1}, {-1, 1}})}) {
      const auto op = nystrom(g, g.dim() == 1 ? Domain::interval(0, 1) : Domain::cube(2, 0, 1), 3.0);
      worst = std::max(worst, std::visit([](const auto& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); },
                                         op.matrix));
    }
    return {worst <= 1e-13, "max |A - A*| " + fmt(worst)};
  });

  run("trace_identity_EFE_FEF", [&]() -> std::pair<bool, std::string> {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim(4, 40);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const int n = dim(rng);
      std::uniform_int_distribution<int> rank(1, n);
      const RealMatrix E = random_projection(n, rank(rng), rng);
      const RealMatrix F = random_projection(n, rank(rng), rng);
      const RealMatrix a = E * F * E, b = F * E * F;
      Eigen::SelfAdjointEigenSolver<RealMatrix> ea(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
      Eigen::SelfAdjointEigenSolver<RealMatrix> eb(0.5 * (b + b.transpose()), Eigen::EigenvaluesOnly);
      worst = std::max(worst, (ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff());
    }
    return {worst < 1e-10, "50 pairs, max spectral gap " + fmt(worst)};
  });

  run("complement_purity", [&]() -> std::pair<bool, std::string> {
    const int N = 38;
    const RealMatrix c = ring_correlation(N, 9);
    double worst = 0.0;
    for (int n : {1, 7, 19, 30}) {
      std::vector<int> block, rest;
      for (int j = 0; j < N; ++j) (j < n ? block : rest).push_back(j);
      for (const auto& a : {RenyiOrder(0.5), RenyiOrder::one(), RenyiOrder(2.0)}) {
        const double x = renyi_entropy(eigenvalues(restrict_to(c, block)), a).S;
        const double y = renyi_entropy(eigenvalues(restrict_to(c, rest)), a).S;
        worst = std::max(worst, std::abs(x - y));
      }
    }
    return {worst < 1e-10, "ring N=38 at half filling, max |S(A) - S(A^c)| " + fmt(worst)};
  });

  run("projector_zero_entropy", [&]() -> std::pair<bool, std::string> {
    std::mt19937_64 rng(seed);
    const auto s = eigenvalues(random_projection(20, 7, rng));
    for (const auto& a : {RenyiOrder(0.25), RenyiOrder::one(), RenyiOrder(3.0), RenyiOrder::infinity()}) {
      const double v = renyi_entropy(s, a).S;
      if (v != 0.0) return {false, "S = " + fmt(v) + " at alpha " + a.to_string()};
    }
    return {true, "S = 0 exactly"};
  });

  run("h_symmetry_and_range", [&]() -> std::pair<bool, std::string> {
    for (double a : {0.2, 0.5, 1.0, 2.0, 7.0, std::numeric_limits<double>::infinity()}) {
      for (int k = 0; k <= 1024; ++k) {
        const double t = k / 1024.0;  // 1 - t is exact
        const double v = renyi_h(RenyiOrder(a), t);
        if (!(v >= 0.0 && v <= std::log(2.0) + 1e-15)) return {false, "h out of [0, ln 2]"};
        if (std::abs(v - renyi_h(RenyiOrder(a), 1.0 - t)) > 1e-15) return {false, "h(t) != h(1-t)"};
      }
    }
    return {true, "alpha in {0.2,0.5,1,2,7,inf}"};
  });

  run("alpha_monotonicity", [&]() -> std::pair<bool, std::string> {
    const std::vector<Spectrum> spectra{eigenvalues(nystrom(Domain::interval(-1, 1), Domain::interval(0, 1), 15.0)),
                                        eigenvalues(nystrom(Domain::ball(2, 1.0), Domain::ball(2, 1.0), 2.0)),
                                        eigenvalues(lattice_correlation(pi / 2, 80))};
    const std::vector<RenyiOrder> orders{RenyiOrder(0.25), RenyiOrder(0.5), RenyiOrder::one(), RenyiOrder(2.0),
                                         RenyiOrder(5.0), RenyiOrder::infinity()};
    for (const auto& s : spectra) {
      double prev = std::numeric_limits<double>::infinity();
      for (const auto& a : orders) {
        const double v = renyi_entropy(s, a).S;
        if (v > prev + 1e-12) return {false, "S_alpha increased at alpha " + a.to_string()};
        prev = v;
      }
    }
    return {true, "3 spectra, 6 orders"};
  });

  run("min_entropy_identity", [&]() -> std::pair<bool, std::string> {
    const auto s = eigenvalues(lattice_correlation(pi / 2, 60));
    double logp = 0.0;
    for (double v : s.eigenvalues) logp += std::log(std::max(v, 1.0 - v));
    const double dev = std::abs(std::exp(-renyi_entropy(s, RenyiOrder::infinity()).S) - std::exp(logp));
    return {dev < 1e-12, "|exp(-S_inf) - prod max(l, 1-l)| " + fmt(dev)};
  });

  run("functional_closed_form", [&]() -> std::pair<bool, std::string> {
    double worst = 0.0;
    for (double a : {0.25, 0.5, 1.0, 1.5, 2.0, 4.0, 10.0}) {
      const RenyiOrder alpha(a);
      const double v = I_functional([&](double t, double s) { return renyi_h(alpha, t, s); }).value;
      worst = std::max(worst, std::abs(v - I_h_closed_form(alpha)));
    }
    worst = std::max(worst, std::abs(I_h_numeric(RenyiOrder::infinity()).value - kIhInfinityLimit));
    return {worst < 1e-8, "max |I(h_a) - (1+a)/(24a)|, alpha = inf included: " + fmt(worst)};
  });

  run("widom_coefficient_cross_check", [&]() -> std::pair<bool, std::string> {
    const auto sq = Domain::cube(2, -1, 1);
    const auto unit = Domain::cube(2, 0, 1);
    const double exact = widom_J_face_pair(sq, unit);
    const double quad = widom_J_quadrature(sq, unit, 16).value;
    const double disk = widom_J_quadrature(Domain::ball(2, 1.0), Domain::ball(2, 1.0), 512).value;
    const double dev1 = std::abs(exact - quad);
    const double dev2 = std::abs(disk - 4.0) / 4.0;
    return {dev1 < 1e-6 && dev2 < 1e-3, "square " + fmt(dev1) + ", disk rel " + fmt(dev2)};
  });

  return report;
}

}  // namespace fermi
