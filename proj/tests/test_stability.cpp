#include <cmath>

#include <gtest/gtest.h>

#include "hs2/instances.hpp"
#include "hs2/stability.hpp"

using namespace hs2;

TEST(FitLogLog, ExactPowerLaws) {
  const auto xs = geometric_grid(1e-1, 1e-3, 8);
  std::vector<double> sq, quart;
  for (double x : xs) {
    sq.push_back(x * x);
    quart.push_back(5 * std::pow(x, 4));
  }
  const auto f2 = fit_loglog(xs, sq);
  EXPECT_NEAR(f2.slope, 2.0, 1e-12);
  EXPECT_NEAR(f2.max_residual, 0.0, 1e-12);
  const auto f4 = fit_loglog(xs, quart);
  EXPECT_NEAR(f4.slope, 4.0, 1e-12);
  EXPECT_NEAR(f4.intercept, std::log(5.0), 1e-11);
}

TEST(FitLogLog, NoisyData) {
  const auto xs = geometric_grid(1e-1, 1e-3, 12);
  std::vector<double> ys;
  for (std::size_t i = 0; i < xs.size(); ++i) ys.push_back(xs[i] * xs[i] * (1 + (i % 2 ? 0.01 : -0.01)));
  EXPECT_NEAR(fit_loglog(xs, ys).slope, 2.0, 0.02);
}

TEST(FitLogLog, RejectsBadInput) {
  EXPECT_THROW(fit_loglog({1, 2, 3}, {1, 2, 3}), DomainError);
  EXPECT_THROW(fit_loglog({1, 2, 3, 4}, {1, 2, 0, 4}), DomainError);
  EXPECT_THROW(fit_loglog({1, 2, 3, -4}, {1, 2, 3, 4}), DomainError);
  EXPECT_THROW(fit_loglog({1, 2, 3, 4}, {1, 2, 3}), DomainError);
}

TEST(GeometricGrid, DefaultGrid) {
  const auto g = default_eps_grid();
  ASSERT_EQ(g.size(), 12u);
  EXPECT_DOUBLE_EQ(g.front(), 1e-1);
  EXPECT_NEAR(g.back(), 1e-3, 1e-18);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_LT(g[i], g[i - 1]);
}

TEST(StabilitySweep, CaseI) {
  const auto c = case_instance("I");
  const auto r = stability_sweep(c.params, c.t0);
  EXPECT_NEAR(r.slope_deficit, 2.0, 0.05);
  EXPECT_NEAR(r.slope_distance, 2.0, 0.05);
  EXPECT_NEAR(r.iota_estimate, 1.0, 0.05);
  EXPECT_EQ(r.classification_iota, 1.0);
  EXPECT_LT(r.quadrature_deficit_rel_error, 1e-7);
  EXPECT_LT(r.numeric_distance_abs_error, 1e-8);
}

TEST(StabilitySweep, CaseII1) {
  const auto c = case_instance("II.1");
  const auto r = stability_sweep(c.params, c.t0);
  EXPECT_EQ(r.case_label, "II.1");
  EXPECT_NEAR(r.slope_deficit, 4.0, 0.05);
  EXPECT_NEAR(r.slope_distance, 2.0, 0.05);
  EXPECT_NEAR(r.iota_estimate, 0.5, 0.05);
  EXPECT_LT(r.quadrature_deficit_rel_error, 1e-7);
}

TEST(StabilitySweep, EveryDegenerateCaseRecoversIota) {
  for (const std::string label : {"II.1", "II.2", "II.3", "II.4"}) {
    const auto c = case_instance(label);
    const auto r = stability_sweep(c.params, c.t0);
    EXPECT_EQ(r.case_label, label);
    EXPECT_NEAR(r.iota_estimate, r.classification_iota, 0.05) << label;
    EXPECT_GT(r.iota_estimate, 0.0);
    EXPECT_LT(r.iota_estimate, 1.5);
    EXPECT_GT(r.observed_constant, 0.0);
    for (std::size_t i = 0; i < r.deficits.size(); ++i) {
      EXPECT_GT(r.deficits[i], 0.0);
      EXPECT_GT(r.distances[i], 0.0);
      if (i > 0) EXPECT_LT(r.deficits[i], r.deficits[i - 1]) << label;
    }
  }
}

TEST(StabilitySweep, CaseII2Family) {
  const auto c = case_instance("II.2");
  const auto r = stability_sweep(c.params, ExtendedT::finite(0.0));
  EXPECT_NEAR(r.slope_deficit, 4.0, 0.05);
}

TEST(StabilitySweep, RejectsNonMinimizer) {
  const auto c = case_instance("I");
  EXPECT_THROW(stability_sweep(c.params, ExtendedT::finite(0.5)), DomainError);
  EXPECT_THROW(stability_sweep(c.params, ExtendedT::infinity()), DomainError);
}

TEST(StabilitySweep, RejectsBadGrids) {
  const auto c = case_instance("I");
  EXPECT_THROW(stability_sweep(c.params, c.t0, {0.1, 0.05, 0.02}), DomainError);
  EXPECT_THROW(stability_sweep(c.params, c.t0, {0.5, 0.1, 0.05, 0.01}), DomainError);
  EXPECT_THROW(stability_sweep(c.params, c.t0, {0.01, 0.05, 0.1, 0.2}), DomainError);
}

TEST(StabilitySweep, NoExponentForConstantG) {
  const auto c = case_instance("CONSTANT_G");
  EXPECT_THROW(stability_sweep(c.params, c.t0), DomainError);
}

TEST(Instances, UnknownPreset) { EXPECT_THROW(case_instance("III"), DomainError); }

TEST(GIncrement, MatchesDirectDifference) {
  const auto c = case_instance("I");
  for (double t : {1.1, 1.5, 3.0})
    EXPECT_NEAR(g_increment(c.params, 1.0, t), g_eval(c.params, t) - g_eval(c.params, 1.0), 1e-14);
}
