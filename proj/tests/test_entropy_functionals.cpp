#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fermi/entropy_functionals.hpp"

using namespace fermi;
constexpr double pi = std::numbers::pi;
const double ln2 = std::log(2.0);

namespace {

// Direct transcription of the definitions, no stabilization.
double naive_h(double alpha, double t) {
  if (t < 0.0 || t > 1.0) return 0.0;
  if (alpha == 1.0) {
    double v = 0.0;
    if (t > 0.0) v -= t * std::log(t);
    if (t < 1.0) v -= (1.0 - t) * std::log(1.0 - t);
    return v;
  }
  if (std::isinf(alpha)) return -std::log(std::max(t, 1.0 - t));
  return std::log(std::pow(t, alpha) + std::pow(1.0 - t, alpha)) / (1.0 - alpha);
}

const double inf = std::numeric_limits<double>::infinity();

}  // namespace

TEST(RenyiOrder, KindsAndParsing) {
  EXPECT_EQ(RenyiOrder(1.0).kind(), RenyiOrder::Kind::one);
  EXPECT_EQ(RenyiOrder(inf).kind(), RenyiOrder::Kind::infinity);
  EXPECT_EQ(RenyiOrder(1.0 + 1e-15).kind(), RenyiOrder::Kind::finite);
  EXPECT_EQ(RenyiOrder::parse("inf"), RenyiOrder::infinity());
  EXPECT_EQ(RenyiOrder::parse("0.5").value(), 0.5);
  EXPECT_EQ(RenyiOrder::parse("1"), RenyiOrder::one());
  EXPECT_THROW(RenyiOrder(0.0), InvalidArgument);
  EXPECT_THROW(RenyiOrder(-2.0), InvalidArgument);
  EXPECT_THROW(RenyiOrder(std::nan("")), InvalidArgument);
  EXPECT_THROW(RenyiOrder::parse("2x"), InvalidArgument);
  EXPECT_THROW(RenyiOrder::parse(""), InvalidArgument);
  EXPECT_EQ(RenyiOrder::infinity().to_string(), "inf");
  EXPECT_EQ(RenyiOrder::parse(RenyiOrder(0.1).to_string()), RenyiOrder(0.1));
  EXPECT_LT(RenyiOrder(2.0), RenyiOrder::infinity());
}

TEST(RenyiH, Examples) {
  EXPECT_NEAR(renyi_h(RenyiOrder(1.0), 0.5), ln2, 1e-16);
  EXPECT_NEAR(renyi_h(RenyiOrder(2.0), 0.5), ln2, 1e-16);
  for (double a : {0.3, 1.0, 2.0, 7.0, inf}) EXPECT_EQ(renyi_h(RenyiOrder(a), -0.3), 0.0);
  EXPECT_NEAR(renyi_h(RenyiOrder::infinity(), 0.5), ln2, 1e-16);
  EXPECT_EQ(renyi_h(RenyiOrder::infinity(), 1.0), 0.0);
  EXPECT_EQ(renyi_h(RenyiOrder::one(), 0.0), 0.0);
  EXPECT_EQ(renyi_h(RenyiOrder::one(), 1.0), 0.0);
  EXPECT_EQ(renyi_h(RenyiOrder(3.0), 1.5), 0.0);
}

TEST(RenyiH, AgreesWithDefinition) {
  for (double a : {0.25, 0.5, 1.0, 1.5, 2.0, 4.0, 10.0, inf})
    for (int k = 1; k < 100; ++k) {
      const double t = k / 100.0;
      EXPECT_NEAR(renyi_h(RenyiOrder(a), t), naive_h(a, t), 1e-14) << a << " " << t;
    }
}

TEST(RenyiH, ComplementFormKeepsAccuracyNearOne) {
  // h_1(1 - s) ~ s(1 - ln s) for tiny s; 1 - s would round to 1.
  const double s = 1e-20;
  const double v = renyi_h(RenyiOrder::one(), 1.0 - s, s);
  EXPECT_NEAR(v, s * (1.0 - std::log(s)), 1e-12 * v);
  EXPECT_NEAR(renyi_h(RenyiOrder(0.5), 1.0 - s, s), 2.0 * std::sqrt(s), 1e-9 * 2.0 * std::sqrt(s));
}

TEST(RenyiH, RangeAndSymmetry) {
  for (double a : {0.1, 0.3, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0, 50.0, inf})
    for (int k = -5; k <= 205; ++k) {
      const double t = k / 200.0;
      const double v = renyi_h(RenyiOrder(a), t);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, ln2 + 1e-15);
      if (t >= 0.0 && t <= 1.0) EXPECT_NEAR(v, renyi_h(RenyiOrder(a), 1.0 - t), 4e-15);  // 1 - t itself rounds
    }
}

TEST(RenyiH, NonIncreasingInAlpha) {
  const std::vector<RenyiOrder> grid{RenyiOrder(0.3), RenyiOrder(0.5), RenyiOrder::one(), RenyiOrder(2.0),
                                     RenyiOrder(5.0), RenyiOrder::infinity()};
  for (int k = 1; k <= 99; ++k) {
    const double t = k / 100.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
      EXPECT_LE(renyi_h(grid[i], t), renyi_h(grid[i - 1], t) + 1e-15) << t << " " << grid[i].to_string();
  }
}

TEST(RenyiH, PointwiseLimits) {
  for (int k = 1; k <= 99; ++k) {
    const double t = k / 100.0;
    const double h1 = renyi_h(RenyiOrder::one(), t);
    EXPECT_NEAR(renyi_h(RenyiOrder(0.999), t), h1, 1e-3);
    EXPECT_NEAR(renyi_h(RenyiOrder(1.001), t), h1, 1e-3);
    EXPECT_NEAR(renyi_h(RenyiOrder(1e4), t), renyi_h(RenyiOrder::infinity(), t), 1e-3);
  }
}

TEST(IFunctional, Examples) {
  EXPECT_NEAR(I_functional([](double t) { return t; }).value, 0.0, 1e-15);
  EXPECT_NEAR(I_functional([](double t) { return t * (1.0 - t); }).value, 1.0 / (4.0 * pi * pi), 1e-13);
  EXPECT_NEAR(I_functional([](double t, double s) { return renyi_h(RenyiOrder::one(), t, s); }).value, 1.0 / 12.0,
              1e-8);
}

TEST(IFunctional, PolynomialOracle) {
  // f(t) = t^2: (t^2 - t) / (t(1-t)) = -1, so I = -1/(4 pi^2)
  EXPECT_NEAR(I_functional([](double t) { return t * t; }).value, -1.0 / (4.0 * pi * pi), 1e-13);
  // f(t) = t^3: integrand -(1 + t), integral -3/2
  EXPECT_NEAR(I_functional([](double t) { return t * t * t; }).value, -1.5 / (4.0 * pi * pi), 1e-13);
}

TEST(IFunctional, MatchesClosedFormOnRenyiFunctions) {
  for (double a : {0.25, 0.5, 1.0, 1.5, 2.0, 4.0, 10.0}) {
    const RenyiOrder alpha(a);
    const auto r = I_functional([&](double t, double s) { return renyi_h(alpha, t, s); });
    const double exact = I_h_closed_form(alpha);
    EXPECT_NEAR(r.value, exact, 1e-8) << a;
    // the reported estimate bounds the observed deviation
    EXPECT_LE(std::abs(r.value - exact), std::max(r.abs_error_estimate, 1e-14)) << a;
    EXPECT_GT(r.evaluations, 0);
  }
}

TEST(IFunctional, SmallAlphaNeedsComplementOnlyNearOne) {
  const RenyiOrder alpha(0.1);
  const auto r = I_functional([&](double t, double s) { return renyi_h(alpha, t, s); }, 1e-11);
  EXPECT_NEAR(r.value, I_h_closed_form(alpha), 1e-8);
}

TEST(IFunctional, InfinityOrderApproachesLimitConstant) {
  // the kink of h_inf at t = 1/2 limits tanh-sinh to algebraic convergence
  const auto r = I_functional([](double t, double s) { return renyi_h(RenyiOrder::infinity(), t, s); }, 1e-9, 16);
  EXPECT_NEAR(r.value, kIhInfinityLimit, 1e-8);
}

TEST(IFunctional, ReportsNonConvergence) {
  // f jumps to 1 off the origin: the integrand ~ 1/t is not integrable
  EXPECT_THROW(I_functional([](double t) { return t > 0.0 ? 1.0 : 0.0; }), ConvergenceError);
  // heavy oscillation with a tiny level budget
  EXPECT_THROW(I_functional([](double t) { return std::sin(400.0 * t); }, 1e-14, 3), ConvergenceError);
  EXPECT_THROW(I_functional([](double t) { return t; }, 0.0), InvalidArgument);
}

TEST(IClosedForm, Examples) {
  EXPECT_EQ(I_h_closed_form(RenyiOrder::one()), 2.0 / 24.0);
  EXPECT_NEAR(I_h_closed_form(RenyiOrder::one()), 1.0 / 12.0, 1e-17);
  EXPECT_NEAR(I_h_closed_form(RenyiOrder(2.0)), 1.0 / 16.0, 1e-17);
  EXPECT_NEAR(I_h_closed_form(RenyiOrder(0.5)), 1.0 / 8.0, 1e-17);
  EXPECT_THROW(I_h_closed_form(RenyiOrder::infinity()), InvalidArgument);
  EXPECT_NEAR(I_h_closed_form(RenyiOrder(1e12)), kIhInfinityLimit, 1e-12);
}

TEST(ShiftedDilog, LogarithmicLimit) {
  // Li(y) + (ln y)^2 / 2 + pi^2/6 = ln(y)/y + 1/y + O(ln^2 y / y^2); mpmath at y = 1e6:
  const double y6 = 1e6;
  EXPECT_NEAR(shifted_dilog(y6) + 0.5 * std::log(y6) * std::log(y6) + pi * pi / 6.0, 1.4815517715724269e-5, 1e-11);
  const double y7 = 1e7;
  EXPECT_LT(std::abs(shifted_dilog(y7) + 0.5 * std::log(y7) * std::log(y7) + pi * pi / 6.0), 1e-5);
  EXPECT_EQ(shifted_dilog(1.0), 0.0);
}

TEST(SubstitutionIntegral, FrozenValues) {
  // mpmath quad of int_0^10 ds/s [-a ln(1+s) + ln(1+s^a)]
  EXPECT_NEAR(substitution_integral(2.0, std::log(10.0)), -2.277178185058738255, 1e-12);
  EXPECT_NEAR(substitution_integral(0.5, std::log(10.0)), 1.9277630711196122864, 1e-12);
}

TEST(SubstitutionIntegral, DilogRouteMatchesClosedForm) {
  for (double a : {0.25, 0.5, 0.75, 1.5, 2.0, 4.0, 10.0})
    EXPECT_NEAR(I_h_via_dilog(RenyiOrder(a)), I_h_closed_form(RenyiOrder(a)), 1e-8) << a;
  EXPECT_THROW(I_h_via_dilog(RenyiOrder::one()), InvalidArgument);
  EXPECT_THROW(I_h_via_dilog(RenyiOrder::infinity()), InvalidArgument);
}

TEST(IFunctional, FoldedQuadratureCoversEveryOrder) {
  for (double a : {0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 4.0, 10.0, 50.0}) {
    const RenyiOrder alpha(a);
    const auto r = I_h_numeric(alpha);
    EXPECT_NEAR(r.value, (1.0 + a) / (24.0 * a), 1e-11) << a;
    EXPECT_NEAR(r.value, I_functional([&](double t, double s) { return renyi_h(alpha, t, s); }, 1e-11).value, 1e-10)
        << a;
  }
  // the kink of h_inf at 1/2 sits at the folded endpoint, so full accuracy is reached
  const auto inf = I_h_numeric(RenyiOrder::infinity());
  EXPECT_NEAR(inf.value, 1.0 / 24.0, 1e-12);
  EXPECT_LT(inf.abs_error_estimate, 1e-11);
  EXPECT_THROW(I_h_numeric(RenyiOrder::one(), 0.0), InvalidArgument);
}
