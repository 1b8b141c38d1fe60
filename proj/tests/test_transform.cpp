#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hs2/transform.hpp"

using namespace hs2;

namespace {

HSParams caseI() { return make_params(3, 1.0, 2, 2, 1, 1, 1); }

}  // namespace

TEST(EllTransform, IdentityAtOne) {
  const auto U = bubble(caseI(), 1, 1);
  const auto T = ell_transform(U, 1.0);
  for (double r : {0.1, 1.0, 10.0}) {
    EXPECT_EQ(T(r).value, U(r).value);
    EXPECT_EQ(T(r).d1, U(r).d1);
  }
}

TEST(EllTransform, RejectsEllOutsideRange) {
  const auto U = bubble(caseI(), 1, 1);
  EXPECT_THROW(ell_transform(U, 0.0), DomainError);
  EXPECT_THROW(ell_transform(U, 1.2), DomainError);
}

TEST(EllTransform, ChainRule) {
  const auto U = bubble(caseI(), 1, 1);
  const double ell = 0.6;
  const auto T = ell_transform(U, ell);
  for (double r : {0.3, 1.0, 2.0}) {
    const double rho = std::pow(r, 1 / ell);
    EXPECT_NEAR(T(r).value, std::sqrt(ell) * U(rho).value, 1e-15);
    EXPECT_NEAR(T(r).d1, std::sqrt(ell) / ell * std::pow(r, 1 / ell - 1) * U(rho).d1, 1e-14);
    const double h = 1e-5;
    EXPECT_NEAR(T(r).d2, (T(r + h).d1 - T(r - h).d1) / (2 * h), 1e-6);
  }
}

TEST(EllTransform, EnergyIdentity) {
  const HSParams P = caseI();
  const auto U = bubble(P, 1, 1);
  const double ell = 0.7;
  const double lhs = dirichlet_energy(ell_transform(U, ell), 3);
  const double rhs = weighted_energy(U, 3, ell_energy_weight(3, ell));
  EXPECT_NEAR(lhs, rhs, 1e-7);
  // The lower bound with the ell^2 factor, compared literally.
  EXPECT_GE(lhs, ell * ell * rhs);
}

TEST(EllTransform, NormIdentity) {
  for (double s : {0.5, 1.0, 1.5}) {
    const double p = hardy_sobolev_exponent(3, s);
    const HSParams P = make_params(3, s, p / 2, p / 2, 1, 1, 1);
    const auto U = bubble(P, 1, 1);
    for (double ell : {0.4, 0.7}) {
      const double lhs = weighted_power(ell_transform(U, ell), p, 3, s);
      const double rhs = std::pow(ell, p / 2 + 1) * weighted_power(U, p, 3, ell_norm_weight(3, s, ell));
      EXPECT_NEAR(lhs, rhs, 1e-7);
    }
  }
}

TEST(EllBubble, MapsToBubble) {
  const HSParams P = make_params(3, 1.5, 1.4, 1.6, 1, 1, 1);
  const double k0 = bubble_norm_k0(3, 1.5);
  for (double ell : {0.3, 0.8})
    for (auto [c, lam] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {0.7, 2.5}}) {
      const auto T = ell_transform(ell_bubble(P, c, lam, ell), ell);
      const auto B = bubble(P, std::sqrt(ell) * c / k0, std::pow(lam, ell));
      for (double r : log_grid(1e-3, 1e3, 25))
        EXPECT_NEAR(T(r).value, B(r).value, 1e-9 * std::max(1.0, std::abs(B(r).value)));
    }
}

TEST(EllBubble, AnalyticDerivatives) {
  const HSParams P = caseI();
  const auto W = ell_bubble(P, 1.3, 0.8, 0.6);
  for (double r : {0.2, 1.0, 5.0}) {
    const double h = 1e-5 * r;
    EXPECT_NEAR(W(r).d1, (W(r + h).value - W(r - h).value) / (2 * h), 1e-7);
    EXPECT_NEAR(W(r).d2, (W(r + h).d1 - W(r - h).d1) / (2 * h), 1e-6);
  }
}

TEST(CorollaryCheck, ZeroOnWeightedManifold) {
  const HSParams P = caseI();
  const auto w = ell_bubble(P, 1.0, 1.5, 0.5);
  const auto rep = corollary_check(w, w, 0.5, P);
  EXPECT_NEAR(rep.weighted.deficit, 0.0, 1e-7);
  EXPECT_TRUE(rep.nonnegative);
}

TEST(CorollaryCheck, RadialEqualityAndContinuity) {
  const HSParams P = make_params(3, 1.0, 1.5, 2.5, 1.2, 0.8, 1);
  const auto u = linear_combination({{1.0, bubble(P, 1, 1)}, {0.2, bump()}});
  const auto v = linear_combination({{0.6, bubble(P, 1, 2)}, {0.1, bump(0.8, 1.6)}});
  const auto rep = corollary_check(u, v, 0.6, P);
  EXPECT_NEAR(rep.gap, 0.0, 1e-7);
  EXPECT_TRUE(rep.comparison_holds);
  const double d = deficit_pair(u, v, P).deficit;
  EXPECT_NEAR(weighted_deficit(u, v, 1 - 1e-9, P).deficit, d, 1e-6);
  EXPECT_NEAR(weighted_deficit(u, v, 1.0, P).deficit, d, 1e-12);
}

TEST(CorollaryCheck, RandomProfiles) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(0, 1);
  const HSParams P = make_params(3, 1.0, 1.5, 2.5, 1, 1.5, 0.8);
  for (double ell : {0.3, 0.5, 0.9})
    for (int i = 0; i < 7; ++i) {
      const auto u = linear_combination({{0.2 + U(rng), bubble(P, 1, 0.5 + U(rng))},
                                         {U(rng), bump()}});
      const auto v = linear_combination({{0.2 + U(rng), bubble(P, 1, 0.5 + U(rng))},
                                         {U(rng), bump(0.3, 1.2)}});
      const auto rep = corollary_check(u, v, ell, P);
      EXPECT_TRUE(rep.comparison_holds) << ell << " " << rep.gap;
      EXPECT_TRUE(rep.nonnegative) << ell;
    }
}
