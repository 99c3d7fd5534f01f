#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fermi/geometry.hpp"
#include "fermi/widom.hpp"

using namespace fermi;
constexpr double pi = std::numbers::pi;

namespace {

std::vector<Domain> catalog_2d() {
  return {Domain::cube(2, 0.0, 1.0), Domain::cube(2, -1.0, 1.0), Domain::box({{0.0, 2.0}, {-0.5, 0.25}}),
          Domain::ball(2, 1.0), Domain::ball({0.3, -0.2}, 0.7),
          Domain::polygon({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}),
          Domain::polygon({{0.0, 0.0}, {2.0, 0.0}, {2.5, 1.0}, {1.0, 2.0}, {-0.5, 1.0}})};
}

}  // namespace

TEST(Domain, VolumeExamples) {
  EXPECT_NEAR(volume(Domain::ball(2, 1.0)), pi, 1e-15);
  EXPECT_EQ(volume(Domain::interval(-1.0, 1.0)), 2.0);
  EXPECT_EQ(volume(Domain::cube(2, 0.0, 1.0)), 1.0);
  EXPECT_NEAR(volume(Domain::ball(3, 2.0)), 4.0 / 3.0 * pi * 8.0, 1e-13);
  EXPECT_NEAR(volume(Domain::polygon({{0, 0}, {1, 0}, {0, 1}})), 0.5, 1e-15);
  EXPECT_NEAR(volume(Domain::interval_union({{2, 3}, {-1, 0.5}})), 2.5, 1e-15);
}

TEST(Domain, MeanDensityExamples) {
  EXPECT_NEAR(mean_density(Domain::interval(-pi, pi)), 1.0, 1e-15);
  EXPECT_NEAR(mean_density(Domain::ball(2, 1.0)), 1.0 / (4.0 * pi), 1e-16);
  const double kF = 0.7;
  EXPECT_NEAR(mean_density(Domain::interval(-kF, kF)), kF / pi, 1e-16);
}

TEST(Domain, BoundaryMeasureExamples) {
  EXPECT_EQ(boundary_measure(Domain::interval_union({{0, 1}, {2, 3}})), 4.0);
  EXPECT_NEAR(boundary_measure(Domain::ball(2, 1.0)), 2.0 * pi, 1e-15);
  EXPECT_EQ(boundary_measure(Domain::cube(2, 0.0, 1.0)), 4.0);
  EXPECT_NEAR(boundary_measure(Domain::ball(3, 1.0)), 4.0 * pi, 1e-14);
  EXPECT_EQ(boundary_measure(Domain::cube(3, 0.0, 2.0)), 24.0);
  EXPECT_NEAR(boundary_measure(Domain::polygon({{0, 0}, {1, 0}, {0, 1}})), 2.0 + std::sqrt(2.0), 1e-15);
}

TEST(Domain, ConstructionEnforcesInvariants) {
  EXPECT_THROW(Domain::interval(1.0, 1.0), InvalidArgument);
  EXPECT_THROW(Domain::interval_union({{0, 2}, {1, 3}}), InvalidArgument);
  EXPECT_THROW(Domain::interval_union({{0, 1}, {1, 3}}), InvalidArgument);  // touching
  EXPECT_THROW(Domain::interval_union({}), InvalidArgument);
  EXPECT_THROW(Domain::ball(2, 0.0), InvalidArgument);
  EXPECT_THROW(Domain::ball(std::vector<double>(4, 0.0), 1.0), InvalidArgument);
  EXPECT_THROW(Domain::box({{0, 1}, {2, 2}}), InvalidArgument);
  EXPECT_THROW(Domain::polygon({{0, 0}, {0, 1}, {1, 0}}), InvalidArgument);                  // clockwise
  EXPECT_THROW(Domain::polygon({{0, 0}, {1, 0}, {2, 0}, {0, 1}}), InvalidArgument);          // collinear
  EXPECT_THROW(Domain::polygon({{0, 0}, {2, 0}, {0.5, 0.5}, {2, 2}, {0, 2}}), InvalidArgument);  // reflex
  // five-pointed star: every turn is a left turn but the boundary winds twice
  std::vector<std::array<double, 2>> star;
  for (int k = 0; k < 5; ++k) star.push_back({std::cos(4 * pi * k / 5), std::sin(4 * pi * k / 5)});
  EXPECT_THROW(Domain::polygon(star), InvalidArgument);
  // unsorted input is sorted on construction
  const auto u = Domain::interval_union({{2, 3}, {0, 1}});
  EXPECT_EQ(u.as<IntervalUnion>().intervals.front().lo, 0.0);
}

TEST(Domain, ScalingActsOnAllShapes) {
  for (const auto& d : catalog_2d()) {
    const auto s = d.scaled(3.0);
    EXPECT_NEAR(volume(s), 9.0 * volume(d), 1e-12 * volume(s));
    EXPECT_NEAR(boundary_measure(s), 3.0 * boundary_measure(d), 1e-12 * boundary_measure(s));
  }
}

TEST(SurfaceQuadrature, CircleNodes) {
  const auto q = surface_quadrature(Domain::ball(2, 1.0), 16);
  ASSERT_EQ(q.size(), 16u);
  for (std::size_t k = 0; k < q.size(); ++k) {
    EXPECT_NEAR(q.weights[k], 2.0 * pi / 16.0, 1e-15);
    EXPECT_NEAR(norm(q.points[k] - q.normals[k]), 0.0, 1e-15);  // radial normals on the unit circle
  }
}

TEST(SurfaceQuadrature, SquareAndTriangle) {
  const auto sq = surface_quadrature(Domain::cube(2, 0.0, 1.0), 7);
  EXPECT_EQ(sq.size(), 28u);
  EXPECT_NEAR(sq.total_weight(), 4.0, 1e-14);
  for (const auto& n : sq.normals) EXPECT_EQ(std::abs(n[0]) + std::abs(n[1]), 1.0);
  const auto tri = surface_quadrature(Domain::polygon({{0, 0}, {1, 0}, {0, 1}}), 5);
  EXPECT_NEAR(tri.total_weight(), 2.0 + std::sqrt(2.0), 1e-12);
}

TEST(SurfaceQuadrature, InvariantsOnEveryShape) {
  std::vector<Domain> shapes = catalog_2d();
  shapes.push_back(Domain::ball(3, 1.5));
  shapes.push_back(Domain::box({{0, 1}, {0, 2}, {0, 3}}));
  for (const auto& d : shapes) {
    const auto q = surface_quadrature(d, 12);
    for (std::size_t k = 0; k < q.size(); ++k) {
      EXPECT_NEAR(norm(q.normals[k]), 1.0, 1e-12);
      EXPECT_GT(q.weights[k], 0.0);
    }
    EXPECT_NEAR(q.total_weight(), boundary_measure(d), 1e-12 * boundary_measure(d)) << describe(d);
  }
}

TEST(SurfaceQuadrature, RejectsOneDimensionalDomains) {
  EXPECT_THROW(surface_quadrature(Domain::interval(0, 1), 4), InvalidArgument);
}

TEST(WidomJ, OneDimensionalEndpointProduct) {
  const auto j = widom_J(Domain::interval(-1, 1), Domain::interval(0, 1));
  EXPECT_EQ(j.value, 4.0);
  EXPECT_EQ(j.method, JMethod::closed_form);
  EXPECT_EQ(widom_J(Domain::interval_union({{-2, -1}, {1, 2}}), Domain::interval_union({{0, 1}, {3, 4}, {5, 9}})).value,
            24.0);
}

TEST(WidomJ, SquareSquareFacePairAgainstMonteCarlo) {
  const auto g = Domain::cube(2, -1.0, 1.0);
  const auto o = Domain::cube(2, 0.0, 1.0);
  const auto exact = widom_J(g, o);
  EXPECT_EQ(exact.method, JMethod::face_pair_exact);
  EXPECT_NEAR(exact.value, 8.0 / pi, 1e-15);
  const auto mc = widom_J_monte_carlo(g, o, 200000, 7);
  EXPECT_NEAR(mc.value, 8.0 / pi, 5.0 * mc.error_estimate + 1e-12);
  const auto quad = widom_J_quadrature(g, o, 8);
  EXPECT_NEAR(quad.value, 8.0 / pi, 1e-12);
}

TEST(WidomJ, DiskDiskMatchesClosedForm) {
  const auto g = Domain::ball(2, 1.0);
  const auto o = Domain::ball(2, 1.0);
  EXPECT_NEAR(widom_J_sphere(1.0, 2.0 * pi, 2), 4.0, 1e-14);
  const auto q = widom_J(g, o, 256);
  EXPECT_EQ(q.method, JMethod::quadrature);
  EXPECT_NEAR(q.value, 4.0, 1e-3 * 4.0);
  EXPECT_LE(std::abs(q.value - 4.0), q.error_estimate);
}

TEST(WidomJ, SphereClosedFormExamples) {
  // (1/2)! = sqrt(pi)/2 computed here independently of the library
  const double half_factorial = std::sqrt(pi) / 2.0;
  EXPECT_NEAR(widom_J_sphere(1.0, 2.0 * pi, 2), 2.0 / half_factorial * std::sqrt(1.0 / (4.0 * pi)) * 2.0 * pi, 1e-14);
  EXPECT_NEAR(widom_J_sphere(1.0, 4.0 * pi, 3), 2.0, 1e-14);
  EXPECT_NEAR(widom_J_sphere(3.7, 2.0, 1), 4.0, 1e-15);
  EXPECT_THROW(widom_J_sphere(0.0, 1.0, 2), InvalidArgument);
  EXPECT_THROW(widom_J_sphere(1.0, 1.0, 4), InvalidArgument);
}

TEST(WidomJ, SphereSphereQuadratureOracleIn3D) {
  const auto q = widom_J_quadrature(Domain::ball(3, 1.0), Domain::ball(3, 1.0), 24);
  EXPECT_NEAR(q.value, widom_J_sphere(1.0, 4.0 * pi, 3), 1e-3 * 2.0);
}

TEST(WidomJ, DensityFormEqualsSphereForm) {
  for (int d : {1, 2, 3}) {
    for (double pf : {0.5, 1.0, 2.3}) {
      const auto gamma = Domain::ball(d, pf);
      const auto omega = d == 1 ? Domain::interval(0, 1) : Domain::ball(d, 1.0);
      const double a = widom_J_density_form(gamma, omega);
      const double b = widom_J_sphere(pf, boundary_measure(omega), d);
      EXPECT_NEAR(a, b, 1e-12 * b) << d << " " << pf;
    }
  }
  EXPECT_NEAR(widom_J_density_form(Domain::ball(2, 1.0), Domain::ball(2, 1.0)), 4.0, 1e-12 * 4.0);
  EXPECT_NEAR(widom_J_density_form(Domain::ball(1, 1.0), Domain::interval(0, 1)), 4.0, 1e-14);
  EXPECT_THROW(widom_J_density_form(Domain::cube(2, -1, 1), Domain::ball(2, 1.0)), InvalidArgument);
}

TEST(WidomJ, QuadratureConvergesToExactOnCatalogPairs) {
  for (const auto& g : catalog_2d()) {
    for (const auto& o : catalog_2d()) {
      double reference = 0.0;
      if (g.is_polytope() && o.is_polytope()) {
        reference = widom_J_face_pair(g, o);
      } else if (g.is<Ball>()) {
        reference = widom_J_sphere(g.as<Ball>().radius, boundary_measure(o), 2);
      } else {
        reference = widom_J_sphere(o.as<Ball>().radius, boundary_measure(g), 2);  // swap invariance
      }
      const auto q = widom_J_quadrature(g, o, 256);
      EXPECT_NEAR(q.value, reference, 1e-3 * reference) << describe(g) << " / " << describe(o);
    }
  }
}

TEST(WidomJ, SwapInvariance) {
  const auto shapes = catalog_2d();
  for (const auto& g : shapes)
    for (const auto& o : shapes) {
      const double a = widom_J_quadrature(g, o, 64).value;
      const double b = widom_J_quadrature(o, g, 64).value;
      EXPECT_NEAR(a, b, 1e-12 * a);
    }
}

TEST(WidomJ, ScalesWithBoundaryArea) {
  std::vector<std::pair<Domain, Domain>> pairs;
  for (const auto& g : catalog_2d())
    for (const auto& o : catalog_2d()) pairs.emplace_back(g, o);
  pairs.emplace_back(Domain::cube(3, -1, 1), Domain::box({{0, 1}, {0, 2}, {0, 0.5}}));
  pairs.emplace_back(Domain::ball(3, 1.0), Domain::ball(3, 2.0));
  for (const auto& [g, o] : pairs) {
    const int d = g.dim();
    const int res = d == 3 ? 10 : 64;
    const double base = widom_J(g, o, res).value;
    for (double L : {2.0, 3.0}) {
      const double scaled = widom_J(g, o.scaled(L), res).value;
      EXPECT_NEAR(scaled, std::pow(L, d - 1) * base, 1e-12 * scaled) << describe(g) << " " << describe(o);
    }
  }
}

TEST(WidomJ, DeterministicAcrossWorkerCounts) {
  const auto g = Domain::ball(2, 1.0);
  const auto o = Domain::polygon({{0.0, 0.0}, {2.0, 0.0}, {2.5, 1.0}, {1.0, 2.0}, {-0.5, 1.0}});
  const double one = widom_J_quadrature(g, o, 300, 1).value;
  for (unsigned jobs : {2u, 3u, 8u}) EXPECT_EQ(widom_J_quadrature(g, o, 300, jobs).value, one);
}

TEST(WidomJ, DimensionMismatchRejected) {
  EXPECT_THROW(widom_J(Domain::interval(0, 1), Domain::ball(2, 1.0)), InvalidArgument);
  EXPECT_THROW(widom_J(Domain::ball(2, 1.0), Domain::ball(2, 1.0), 64, JRoute::face_pair), InvalidArgument);
}

TEST(WidomJ, PolygonPolytopeMonteCarloOracle) {
  const auto g = Domain::polygon({{-1, -1}, {1, -1}, {0, 1.5}});
  const auto o = Domain::box({{0, 2}, {0, 1}});
  const auto exact = widom_J(g, o);
  const auto mc = widom_J_monte_carlo(g, o, 400000, 11);
  EXPECT_NEAR(mc.value, exact.value, 5.0 * mc.error_estimate);
}
