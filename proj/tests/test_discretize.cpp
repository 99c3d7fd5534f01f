#include <gtest/gtest.h>

#include <Eigen/QR>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fermi/discretize.hpp"
#include "fermi/spectra.hpp"
#include "oracles.hpp"

using namespace fermi;
constexpr double pi = std::numbers::pi;

namespace {

DiscretizationConfig fixed(double npu, int order = 8) {
  DiscretizationConfig c;
  c.nodes_per_unit = npu;
  c.rule.order = order;
  return c;
}

double binary_entropy_sum(const RealMatrix& m) {
  const auto s = eigenvalues(m);
  return spectral_entropy(s.eigenvalues, RenyiOrder::one());
}

RealMatrix random_projection(int n, int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, rank);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < rank; ++k) a(j, k) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, rank);
  return q * q.transpose();
}

}  // namespace

TEST(RegionQuadrature, WeightsSumToVolume) {
  const std::vector<Domain> regions{Domain::interval(0, 1),
                                    Domain::interval_union({{-3, -2.5}, {0, 4}}),
                                    Domain::box({{0, 2}, {-1, 0.5}}),
                                    Domain::cube(3, 0, 1.5),
                                    Domain::ball(2, 1.7),
                                    Domain::ball({1.0, -2.0, 0.5}, 1.2),
                                    Domain::polygon({{0, 0}, {3, 0}, {3.5, 1.0}, {1.0, 2.5}, {-0.5, 1.0}})};
  for (const auto& r : regions) {
    for (double npu : {1.0, 4.0}) {
      const auto q = region_quadrature(r, npu, 8);
      double sum = 0.0;
      for (double w : q.weights) {
        EXPECT_GT(w, 0.0);
        sum += w;
      }
      EXPECT_NEAR(sum, volume(r), 1e-12 * volume(r)) << describe(r);
      EXPECT_EQ(q.size(), region_node_count(r, npu, 8)) << describe(r);
    }
  }
}

TEST(RegionQuadrature, IntegratesSecondMoments) {
  // int_disk x^2 = pi R^4 / 4
  const auto disk = region_quadrature(Domain::ball(2, 2.0), 3.0, 8);
  double m = 0.0;
  for (std::size_t k = 0; k < disk.size(); ++k) m += disk.weights[k] * disk.points[k][0] * disk.points[k][0];
  EXPECT_NEAR(m, pi * 16.0 / 4.0, 1e-11);
  // int_triangle x y over (0,0),(1,0),(0,1) = 1/24
  const auto tri = region_quadrature(Domain::polygon({{0, 0}, {1, 0}, {0, 1}}), 4.0, 8);
  double xy = 0.0;
  for (std::size_t k = 0; k < tri.size(); ++k) xy += tri.weights[k] * tri.points[k][0] * tri.points[k][1];
  EXPECT_NEAR(xy, 1.0 / 24.0, 1e-14);
  // int_ball z^2 = 4 pi R^5 / 15
  const auto ball = region_quadrature(Domain::ball(3, 1.0), 3.0, 8);
  double z2 = 0.0;
  for (std::size_t k = 0; k < ball.size(); ++k) z2 += ball.weights[k] * ball.points[k][2] * ball.points[k][2];
  EXPECT_NEAR(z2, 4.0 * pi / 15.0, 1e-12);
}

TEST(Nystrom, TenNodeExample) {
  const auto op = nystrom(Domain::interval(-1, 1), Domain::interval(0, 1), 1.0, fixed(10.0, 10));
  ASSERT_EQ(op.size(), 10u);
  ASSERT_TRUE(op.is_real());
  const auto& m = std::get<RealMatrix>(op.matrix);
  EXPECT_EQ(m.rows(), 10);
  EXPECT_EQ((m - m.transpose()).cwiseAbs().maxCoeff(), 0.0);
  double wsum = 0.0;
  for (double w : op.weights) wsum += w;
  EXPECT_NEAR(op.trace(), 2.0 / (2.0 * pi) * wsum, 1e-15);
  EXPECT_NEAR(op.trace(), 1.0 / pi, 1e-14);
  EXPECT_EQ(op.provenance.n, 10u);
  EXPECT_EQ(op.provenance.rule, "gl10");
  EXPECT_EQ(op.provenance.L, 1.0);
}

TEST(Nystrom, HermitianForAsymmetricSeas) {
  for (const auto& g : {Domain::interval(0, 2), Domain::interval_union({{-2, -1}, {0.5, 1.5}})}) {
    const auto op = nystrom(g, Domain::interval(0, 1), 5.0);
    ASSERT_FALSE(op.is_real());
    const auto& m = std::get<ComplexMatrix>(op.matrix);
    EXPECT_EQ((m - m.adjoint()).cwiseAbs().maxCoeff(), 0.0);
  }
  const auto op2 = nystrom(Domain::box({{0, 1}, {-1, 1}}), Domain::cube(2, 0, 1), 2.0);
  const auto& m2 = std::get<ComplexMatrix>(op2.matrix);
  EXPECT_EQ((m2 - m2.adjoint()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Nystrom, ParticleNumberAtLargeL) {
  const auto op = nystrom(Domain::interval(-1, 1), Domain::interval(0, 1), 20.0);
  EXPECT_NEAR(op.trace(), 20.0 / pi, 1e-12);
  const auto s = eigenvalues(op);
  int near_one = 0;
  double sum = 0.0;
  for (double v : s.eigenvalues) {
    near_one += v > 0.5;
    sum += v;
  }
  EXPECT_NEAR(sum, op.trace(), 1e-10);
  EXPECT_NEAR(near_one, 20.0 / pi, 1.0);
  EXPECT_LT(s.max_violation, 1e-7);
}

TEST(Nystrom, SelfConsistentUnderRefinement) {
  const Domain g = Domain::interval(-1, 1);
  const Domain o = Domain::interval(0, 1);
  for (double L : {5.0, 30.0}) {
    DiscretizationConfig base;
    DiscretizationConfig finer;
    finer.nodes_per_unit = 1.5 * resolved_nodes_per_unit(g, base);
    for (const auto& a : {RenyiOrder(0.5), RenyiOrder::one(), RenyiOrder(2.0)}) {
      const double s0 = renyi_entropy(eigenvalues(nystrom(g, o, L, base)), a).S;
      const double s1 = renyi_entropy(eigenvalues(nystrom(g, o, L, finer)), a).S;
      EXPECT_LT(std::abs(s0 - s1), 1e-4) << L << " " << a.to_string();
    }
  }
  DiscretizationConfig base;
  DiscretizationConfig finer;
  finer.nodes_per_unit = 1.5 * resolved_nodes_per_unit(Domain::ball(2, 1.0), base);
  const double d0 = renyi_entropy(eigenvalues(nystrom(Domain::ball(2, 1.0), Domain::ball(2, 1.0), 3.0, base)),
                                  RenyiOrder::one()).S;
  const double d1 = renyi_entropy(eigenvalues(nystrom(Domain::ball(2, 1.0), Domain::ball(2, 1.0), 3.0, finer)),
                                  RenyiOrder::one()).S;
  EXPECT_LT(std::abs(d0 - d1), 1e-4);
}

TEST(Nystrom, DilatationEquivalence) {
  const std::vector<std::pair<Domain, Domain>> cases{
      {Domain::interval(-1, 1), Domain::interval(0, 1)},
      {Domain::interval(0, 2), Domain::interval_union({{0, 1}, {2, 3}})},
      {Domain::cube(2, -1, 1), Domain::cube(2, 0, 1)},
      {Domain::ball(2, 1.0), Domain::ball(2, 1.0)}};
  for (const auto& [g, o] : cases) {
    for (double L : {2.0, 4.5}) {
      const auto a = eigenvalues(nystrom(g, o, L)).eigenvalues;
      const auto b = eigenvalues(nystrom(g.scaled(L), o, 1.0)).eigenvalues;
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-10) << describe(g) << " " << L;
    }
  }
}

TEST(Nystrom, GuardsAndBudget) {
  const Domain g = Domain::interval(-1, 1);
  const Domain o = Domain::interval(0, 1);
  EXPECT_THROW(nystrom(g, o, 0.5), InvalidArgument);
  EXPECT_THROW(nystrom(g, Domain::cube(2, 0, 1), 2.0), InvalidArgument);
  auto coarse = fixed(0.5 * nyquist_nodes_per_unit(g));
  EXPECT_THROW(nystrom(g, o, 10.0, coarse), InvalidArgument);
  coarse.nyquist = NyquistPolicy::warn;
  EXPECT_TRUE(nystrom(g, o, 10.0, coarse).nyquist_warning);
  EXPECT_FALSE(nystrom(g, o, 10.0).nyquist_warning);
  DiscretizationConfig tight;
  tight.max_nodes = 100;
  EXPECT_THROW(nystrom(g, o, 1000.0, tight), ComputationError);
  EXPECT_THROW(nystrom(Domain::polygon({{0, 0}, {1, 0}, {0, 1}}), Domain::cube(2, 0, 1), 1.0), InvalidArgument);
}

TEST(Nystrom, DefaultDensityIsTwelvePerWavelength) {
  DiscretizationConfig c;
  EXPECT_NEAR(resolved_nodes_per_unit(Domain::interval(-1, 1), c), 12.0 / (2.0 * pi), 1e-15);
  EXPECT_GT(resolved_nodes_per_unit(Domain::interval(-1, 1), c), nyquist_nodes_per_unit(Domain::interval(-1, 1)));
  EXPECT_NEAR(nyquist_nodes_per_unit(Domain::interval(0, 3)), 6.0 / pi, 1e-15);
}

TEST(Lattice, Examples) {
  const auto c1 = lattice_correlation(pi / 2, 1);
  ASSERT_EQ(c1.matrix.rows(), 1);
  EXPECT_NEAR(c1.matrix(0, 0), 0.5, 1e-16);
  const auto c2 = lattice_correlation(pi / 2, 2);
  EXPECT_NEAR(c2.matrix(0, 1), 1.0 / pi, 1e-16);
  EXPECT_NEAR(c2.matrix(1, 0), 1.0 / pi, 1e-16);
  const auto s = eigenvalues(c2);
  EXPECT_NEAR(s.eigenvalues[0], 0.5 - 1.0 / pi, 1e-15);
  EXPECT_NEAR(s.eigenvalues[1], 0.5 + 1.0 / pi, 1e-15);
  const double expected = oracle::binary_entropy(0.5 + 1.0 / pi) + oracle::binary_entropy(0.5 - 1.0 / pi);
  EXPECT_NEAR(renyi_entropy(s, RenyiOrder::one()).S, expected, 1e-14);
  EXPECT_NEAR(expected, 0.94789326746755503592, 1e-14);
  EXPECT_THROW(lattice_correlation(0.0, 4), InvalidArgument);
  EXPECT_THROW(lattice_correlation(pi, 4), InvalidArgument);
  EXPECT_THROW(lattice_correlation(1.0, 0), InvalidArgument);
}

TEST(Lattice, ToeplitzStructureAndSpectrumRange) {
  for (double kF : {0.3, pi / 2, 2.9}) {
    const auto c = lattice_correlation(kF, 300);
    const auto& m = c.matrix;
    EXPECT_EQ((m - m.transpose()).cwiseAbs().maxCoeff(), 0.0);
    for (int j = 1; j < 300; j += 37) EXPECT_NEAR(m(j, 0), std::sin(kF * j) / (pi * j), 1e-16);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
    EXPECT_LT(es.eigenvalues().maxCoeff(), 1.0 + 1e-12);
  }
}

TEST(Lattice, RingComplementPurity) {
  // half filling: N = 38 sites, 2*9+1 = 19 occupied momenta
  const int N = 38;
  const RealMatrix c = ring_correlation(N, 9);
  EXPECT_NEAR((c * c - c).cwiseAbs().maxCoeff(), 0.0, 1e-13);
  EXPECT_NEAR(c.trace(), 19.0, 1e-12);
  for (int n : {1, 5, 13, 19, 30}) {
    std::vector<int> block, rest;
    for (int j = 0; j < N; ++j) (j < n ? block : rest).push_back(j);
    EXPECT_NEAR(binary_entropy_sum(restrict_to(c, block)), binary_entropy_sum(restrict_to(c, rest)), 1e-10) << n;
  }
  EXPECT_NEAR(binary_entropy_sum(c), 0.0, 1e-12);  // a pure state
  EXPECT_THROW(ring_correlation(10, 5), InvalidArgument);
}

TEST(TraceIdentity, EFEandFEFShareSpectra) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(4, 40);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = dim(rng);
    std::uniform_int_distribution<int> rank(1, n);
    const RealMatrix E = random_projection(n, rank(rng), rng);
    const RealMatrix F = random_projection(n, rank(rng), rng);
    const RealMatrix efe = E * F * E;
    const RealMatrix fef = F * E * F;
    Eigen::SelfAdjointEigenSolver<RealMatrix> a(0.5 * (efe + efe.transpose()), Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<RealMatrix> b(0.5 * (fef + fef.transpose()), Eigen::EigenvaluesOnly);
    EXPECT_LT((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10) << trial;
  }
}

TEST(OperatorDump, TextAndBinaryRoundTrip) {
  for (const auto& g : {Domain::interval(-1, 1), Domain::interval(0, 2)}) {
    const auto op = nystrom(g, Domain::interval(0, 1), 3.0);
    for (bool binary : {false, true}) {
      std::stringstream ss;
      if (binary) write_operator_binary(op, ss);
      else write_operator_text(op, ss);
      const auto back = read_operator(ss);
      EXPECT_EQ(back.n, op.size());
      EXPECT_EQ(back.dim, 1);
      EXPECT_EQ(back.complex, !op.is_real());
      EXPECT_EQ(back.provenance.gamma, op.provenance.gamma);
      EXPECT_EQ(back.provenance.omega, op.provenance.omega);
      EXPECT_EQ(back.provenance.L, 3.0);
      EXPECT_EQ(back.provenance.rule, "gl8");
      for (std::size_t j = 0; j < op.size(); ++j)
        for (std::size_t k = 0; k < op.size(); ++k) EXPECT_EQ(back.matrix(j, k), detail::entry(op, j, k));
    }
  }
  std::stringstream junk("not an operator\n");
  EXPECT_THROW(read_operator(junk), InvalidArgument);
}
