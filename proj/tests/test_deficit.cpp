#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hs2/deficit.hpp"

using namespace hs2;

namespace {

HSParams caseI() { return make_params(3, 1.0, 2, 2, 1, 1, 1); }

QuadratureOptions tight() { return {1e-13, 20000}; }

}  // namespace

TEST(DeficitPair, ZeroOnManifold) {
  const HSParams P = caseI();
  const auto w = bubble(P, 1, 1);
  EXPECT_NEAR(deficit_pair(w, w, P).deficit, 0.0, 1e-7);
  const auto d = degenerate_case_params(1.4, 1.6, 1.0);
  const HSParams Q = make_params(3, 1.5, 1.4, 1.6, d.lambda, d.mu, 1.0);
  const auto wq = bubble(Q, 1, 2);
  EXPECT_NEAR(deficit_pair(wq, scaled(wq, d.t0), Q).deficit, 0.0, 1e-7);
}

TEST(DeficitPair, SecondComponentZero) {
  const HSParams P = caseI();
  const auto w = bubble(P, 1, 1);
  const double ms = mu_s(3, 1.0);
  // (a, b) = (1, 0): mu_s - S lambda^{2/p} = mu_s (g(0) - g(1)) lambda^{2/p}.
  const double expected = ms * (g_eval(P, 0.0) - g_eval(P, 1.0)) * std::pow(P.lambda, 2 / P.p);
  const auto r = deficit_pair(w, zero_profile(), P, tight());
  EXPECT_GT(r.deficit, 0.0);
  EXPECT_NEAR(r.deficit, expected, 1e-8);
  EXPECT_NEAR(r.deficit, trial_deficit(P, 1, 0, best_constant(P)), 1e-8);
}

TEST(DeficitPair, Homogeneity) {
  const HSParams P = make_params(3, 1.0, 1.5, 2.5, 1.2, 0.8, 1);
  const auto u = linear_combination({{1.0, bubble(P, 1, 1)}, {0.3, bump()}});
  const auto v = linear_combination({{0.5, bubble(P, 1, 2)}, {0.1, bump(0.7, 1.5)}});
  const double d1 = deficit_pair(u, v, P).deficit;
  const double d3 = deficit_pair(scaled(u, 3), scaled(v, 3), P).deficit;
  EXPECT_NEAR(d3, 9 * d1, 1e-8 * std::max(1.0, std::abs(d3)));
}

TEST(DeficitPair, NonnegativeOnRandomInputs) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 1);
  const HSParams P = make_params(3, 1.0, 1.5, 2.5, 1.2, 0.8, 1);
  for (int i = 0; i < 10; ++i) {
    const auto u = linear_combination({{U(rng), bubble(P, 1, 0.5 + U(rng))}, {U(rng), bump()}});
    const auto v = linear_combination({{U(rng), bubble(P, 1, 0.5 + U(rng))}, {U(rng), bump()}});
    EXPECT_GE(deficit_pair(u, v, P).deficit, -1e-7);
  }
}

TEST(DeficitPair, MatchesTrialClosedForm) {
  for (const HSParams& P : {caseI(), make_params(3, 1.5, 1.3, 1.7, 0.9, 1.4, 0.7)}) {
    const double S = best_constant(P);
    const auto w = bubble(P, 1, 1.7);
    for (auto [a, b] : std::vector<std::pair<double, double>>{{1, 0.3}, {0.4, 1.2}, {2, 2}}) {
      const double q = deficit_pair(scaled(w, a), scaled(w, b), P, tight()).deficit;
      EXPECT_NEAR(q, trial_deficit(P, a, b, S), 1e-8);
    }
  }
}

TEST(DeficitSingle, ZeroOnBubbleAndPositiveOffIt) {
  const HSParams P = caseI();
  EXPECT_NEAR(deficit_single(bubble(P, 2, 3), 3, 1.0), 0.0, 1e-7);
  EXPECT_GT(deficit_single(linear_combination({{1.0, bubble(P, 1, 1)}, {0.5, bump()}}), 3, 1.0),
            1e-4);
}

TEST(TrialDeficit, RejectsNegativeCoefficients) {
  EXPECT_THROW(trial_deficit(caseI(), -1, 1, 1), DomainError);
}

TEST(SigmaProjection, Examples) {
  for (double t0 : {0.0, 0.5, 1.0, 3.0}) {
    const auto T = ExtendedT::finite(t0);
    EXPECT_NEAR(sigma_projection(1, t0, T), 1.0, 1e-15);
    const double eps = 0.01;
    EXPECT_NEAR(sigma_projection(1, t0 + eps, T), (1 + t0 * t0 + t0 * eps) / (1 + t0 * t0), 1e-15);
  }
  EXPECT_EQ(sigma_projection(0.7, 2.0, ExtendedT::finite(0)), 0.7);
  EXPECT_EQ(sigma_projection(0.7, 2.0, ExtendedT::infinity()), 2.0);
}

// sigma is the sup over normalized bubbles w1 of <grad(u + t0 v), grad w1>/((1+t0^2) mu_s).
TEST(SigmaProjection, AttainsTheSupremum) {
  const HSParams P = caseI();
  const double ms = mu_s(3, 1.0);
  const double t0 = 1.0, a = 1.0, b = 1.3;
  const auto w = bubble(P, 1, 1);
  const auto u = scaled(w, a), v = scaled(w, b);
  const double sigma = sigma_projection(a, b, ExtendedT::finite(t0));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> L(-3, 3);
  for (int i = 0; i < 20; ++i) {
    const auto w1 = bubble(P, 1, std::exp(L(rng)));
    const double ip = energy_inner_product(u, w1, 3) + t0 * energy_inner_product(v, w1, 3);
    EXPECT_GE(sigma, ip / ((1 + t0 * t0) * ms) - 1e-9);
  }
}

TEST(TrialDistance, PerturbationFormula) {
  const HSParams P = caseI();
  const auto set = find_minimizers(P);
  const double ms = mu_s(3, 1.0);
  EXPECT_NEAR(trial_distance(P, 1, 1, set).distance, 0.0, 1e-15);
  for (double eps : {0.1, 0.01}) {
    const auto d = trial_distance(P, 1, 1 + eps, set);
    EXPECT_NEAR(d.distance, eps * eps * ms / 2, 1e-14);
  }
}

TEST(ManifoldDistance, ZeroOnManifold) {
  const HSParams P = caseI();
  const auto w = bubble(P, 1, 2);
  const auto md = manifold_distance(w, w, P, find_minimizers(P));
  EXPECT_NEAR(md.distance, 0.0, 1e-8);
  EXPECT_NEAR(md.tau, 2.0, 1e-3);
}

TEST(ManifoldDistance, AgreesWithFastPathAndPicksPlusBranch) {
  const HSParams P = caseI();
  const auto set = find_minimizers(P);
  for (double tau : {0.3, 1.0, 4.0}) {
    const auto w = bubble(P, 1, tau);
    for (auto [a, b] : std::vector<std::pair<double, double>>{{1, 1.1}, {1, 0.7}, {0.5, 1.5}}) {
      const auto md = manifold_distance(scaled(w, a), scaled(w, b), P, set);
      EXPECT_NEAR(md.distance, trial_distance(P, a, b, set).distance, 1e-8);
      EXPECT_EQ(md.sign, 1);
    }
  }
}

TEST(ManifoldDistance, TauIndependentForBubbles) {
  const HSParams P = make_params(3, 1.5, 1.4, 1.6, 1, 1, 1);
  const auto set = find_minimizers(P);
  double ref = -1;
  for (double tau : {0.2, 1.0, 7.0}) {
    const auto w = bubble(P, 1, tau);
    const double d = manifold_distance(scaled(w, 1.0), scaled(w, 0.4), P, set).distance;
    if (ref < 0) ref = d;
    EXPECT_NEAR(d, ref, 1e-8);
  }
}

TEST(ManifoldDistance, BracketHitIsReported) {
  const HSParams P = caseI();
  const auto w = bubble(P, 1, std::exp(7.0));
  EXPECT_THROW(manifold_distance(w, w, P, find_minimizers(P)), OptimizationFailure);
}
