#include <cmath>

#include <gtest/gtest.h>

#include "hs2/quadrature.hpp"
#include "hs2/special.hpp"

using namespace hs2;

TEST(WeightedIntegral, GammaIntegral) {
  const auto r = weighted_integral([](double x) { return std::exp(-x); }, 2.0);
  EXPECT_NEAR(r.value, 2.0, 1e-10);
  EXPECT_GE(r.abs_error_estimate, 0.0);
  EXPECT_LE(r.abs_error_estimate, 1e-10);
  EXPECT_GT(r.panels_used, 0);
}

TEST(WeightedIntegral, SingularAtZero) {
  // integral_0^inf r^{-1/2} e^{-r} dr = sqrt(pi)
  IntegrandShape shape;
  const auto r = weighted_integral([](double x) { return std::exp(-x); }, -0.5, shape);
  EXPECT_NEAR(r.value, std::sqrt(M_PI), 1e-10);
}

// integral (1 + r^{2-s})^{-2a} r^{N-1-s} dr = Gamma(a)^2 / ((2-s) Gamma(2a)).
TEST(WeightedIntegral, BetaIntegral) {
  for (auto [N, s] : std::vector<std::pair<int, double>>{{3, 0.5}, {3, 1.0}, {3, 1.5}, {5, 0.5}}) {
    const double q = 2 - s;
    const double a = (N - s) / q;
    IntegrandShape shape;
    shape.exponent_at_zero = 0;
    shape.decay_at_infinity = 2 * a * q;
    const auto r = weighted_integral(
        [&](double x) { return std::pow(1 + std::pow(x, q), -2 * a); }, N - 1 - s, shape);
    const double exact = std::exp(2 * log_gamma(a) - log_gamma(2 * a)) / q;
    EXPECT_NEAR(r.value, exact, 1e-10 * exact);
  }
}

TEST(WeightedIntegral, Breakpoints) {
  // |r - 2| e^{-r} has a kink at 2.
  IntegrandShape shape;
  shape.breakpoints = {2.0};
  const auto r =
      weighted_integral([](double x) { return std::abs(x - 2) * std::exp(-x); }, 0.0, shape);
  EXPECT_NEAR(r.value, 2 * std::exp(-2.0) + 1, 1e-10);
}

TEST(WeightedIntegral, NonIntegrable) {
  IntegrandShape shape;
  EXPECT_THROW(weighted_integral([](double) { return 1.0; }, -1.0, shape), NonIntegrable);
  shape.decay_at_infinity = 1.0;
  EXPECT_THROW(weighted_integral([](double) { return 1.0; }, 0.0, shape), NonIntegrable);
}

TEST(WeightedIntegral, ConvergenceFailureOnTinyBudget) {
  IntegrandShape shape;
  shape.exponent_at_zero = -0.9;
  QuadratureOptions opt;
  opt.tol = 1e-14;
  opt.max_panels = 4;
  EXPECT_THROW(
      weighted_integral([](double x) { return std::pow(x, -0.9) * std::exp(-x); }, 0.0, shape,
                        opt),
      ConvergenceFailure);
}

// Halving the tolerance does not move the value by more than the earlier estimate.
TEST(WeightedIntegral, ConservativeEstimates) {
  IntegrandShape shape;
  shape.exponent_at_zero = -0.7;
  auto f = [](double x) { return std::pow(x, -0.7) / (1 + x * x); };
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    QuadratureOptions a, b;
    a.tol = tol;
    b.tol = tol / 2;
    const auto ra = weighted_integral(f, 0.0, shape, a);
    const auto rb = weighted_integral(f, 0.0, shape, b);
    EXPECT_LE(std::abs(ra.value - rb.value), ra.abs_error_estimate + 1e-15);
  }
}
