#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hs2/radial.hpp"
#include "hs2/special.hpp"

using namespace hs2;
constexpr double pi = std::numbers::pi;

TEST(LogGamma, KnownValues) {
  EXPECT_NEAR(log_gamma(1.0), 0.0, 1e-15);
  EXPECT_NEAR(log_gamma(2.0), 0.0, 1e-15);
  EXPECT_NEAR(log_gamma(0.5), std::log(std::sqrt(pi)), 1e-15);
  // ln 10! = ln 3628800
  EXPECT_NEAR(log_gamma(11.0), std::log(3628800.0), 1e-13 * std::log(3628800.0));
}

TEST(LogGamma, RecurrenceProperty) {
  for (double x : {0.5, 1.5, 3.7, 10.2})
    EXPECT_NEAR(std::exp(log_gamma(x + 1)) / (x * std::exp(log_gamma(x))), 1.0, 1e-12);
}

TEST(LogGamma, RejectsNonpositive) {
  EXPECT_THROW(log_gamma(0.0), DomainError);
  EXPECT_THROW(log_gamma(-1.5), DomainError);
}

TEST(SphereMeasure, LowDimensions) {
  EXPECT_NEAR(sphere_measure(2), 2 * pi, 1e-14);
  EXPECT_NEAR(sphere_measure(3), 4 * pi, 1e-13);
  EXPECT_NEAR(sphere_measure(4), 2 * pi * pi, 1e-13);
  EXPECT_NEAR(sphere_measure(5), 8 * pi * pi / 3, 1e-13);
}

TEST(DimensionPair, AuxiliaryExponentAboveOne) {
  for (int N = 3; N <= 7; ++N)
    for (double s : {0.1, 1.0, 1.9}) EXPECT_GT(make_dimension_pair(N, s).a, 1.0);
  EXPECT_THROW(make_dimension_pair(3, 2.0), DomainError);
}

TEST(MuS, PositiveFinite) {
  for (double s : {0.5, 1.5}) {
    EXPECT_TRUE(std::isfinite(mu_s(3, s)));
    EXPECT_GT(mu_s(3, s), 0.0);
  }
  EXPECT_THROW(mu_s(2, 1.0), DomainError);
  EXPECT_THROW(mu_s(3, 0.0), DomainError);
}

// Independent oracle: as s -> 0 the constant approaches the Sobolev constant
// S_N = N(N-2)/4 * omega^{2/N} (Talenti), i.e. pi N (N-2) (Gamma(N/2)/Gamma(N))^{2/N}.
TEST(MuS, TalentiLimit) {
  for (int N : {3, 4, 5}) {
    const double talenti = pi * N * (N - 2) *
                           std::pow(std::tgamma(N / 2.0) / std::tgamma(N), 2.0 / N);
    EXPECT_NEAR(mu_s(N, 1e-9) / talenti, 1.0, 1e-7) << N;
  }
}

// The bubble attains the constant: its Rayleigh quotient, computed by quadrature.
TEST(MuS, RayleighQuotientOracle) {
  for (auto [N, s] : std::vector<std::pair<int, double>>{{3, 1.0}, {4, 1.0}}) {
    const double p = hardy_sobolev_exponent(N, s);
    const HSParams P = make_params(N, s, p / 2, p / 2, 1, 1, 1);
    const RadialProfile U = bubble(P, 1, 1);
    const double rq = dirichlet_energy(U, N) / std::pow(weighted_power(U, p, N, s), 2 / p);
    EXPECT_NEAR(rq / mu_s(N, s), 1.0, 1e-8);
  }
}

TEST(BubbleNorm, PositiveAndNormalizing) {
  EXPECT_GT(bubble_norm_k0(3, 1.0), 0.0);
  for (auto [N, s] : std::vector<std::pair<int, double>>{
           {3, 0.5}, {3, 1.0}, {3, 1.5}, {4, 1.0}, {5, 0.5}}) {
    const double p = hardy_sobolev_exponent(N, s);
    const HSParams P = make_params(N, s, p / 2, p / 2, 1, 1, 1);
    for (double tau : {0.5, 1.0, 2.0})
      EXPECT_NEAR(weighted_power(bubble(P, 1, tau), p, N, s), 1.0, 1e-8) << N << " " << s;
  }
}
