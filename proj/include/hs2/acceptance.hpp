#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "hs2/coupling.hpp"
#include "hs2/deficit.hpp"
#include "hs2/elemineq.hpp"
#include "hs2/instances.hpp"
#include "hs2/params.hpp"
#include "hs2/radial.hpp"
#include "hs2/special.hpp"
#include "hs2/stability.hpp"
#include "hs2/transform.hpp"

namespace hs2 {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace acceptance {

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

inline const std::vector<std::pair<int, double>>& dimension_pairs() {
  static const std::vector<std::pair<int, double>> pairs{
      {3, 0.5}, {3, 1.0}, {3, 1.5}, {4, 1.0}, {5, 0.5}};
  return pairs;
}

// Any admissible (alpha, beta) for (N, s); only N and s matter for bubbles.
inline HSParams bubble_params(int N, double s) {
  const double p = hardy_sobolev_exponent(N, s);
  return make_params(N, s, p / 2.0, p / 2.0, 1.0, 1.0, 1.0);
}

inline CriterionResult lieb_constant() {
  CriterionResult r{1, "Lieb constant vs Rayleigh quotient of U(1,1)", true, ""};
  double worst = 0.0;
  for (auto [N, s] : dimension_pairs()) {
    const HSParams P = bubble_params(N, s);
    const RadialProfile U = bubble(P, 1.0, 1.0);
    const double rq = dirichlet_energy(U, N) / std::pow(weighted_power(U, P.p, N, s), 2.0 / P.p);
    worst = std::max(worst, std::abs(mu_s(N, s) - rq) / mu_s(N, s));
  }
  r.passed = worst <= 1e-8;
  r.detail = fmt("max relative error %.3g (tol 1e-8)", worst);
  return r;
}

inline CriterionResult normalization() {
  CriterionResult r{2, "Bubble normalization", true, ""};
  double worst = 0.0;
  for (auto [N, s] : dimension_pairs()) {
    const HSParams P = bubble_params(N, s);
    worst = std::max(worst, std::abs(weighted_power(bubble(P, 1.0, 1.0), P.p, N, s) - 1.0));
  }
  r.passed = worst <= 1e-8;
  r.detail = fmt("max |integral - 1| %.3g (tol 1e-8)", worst);
  return r;
}

inline CriterionResult eigen_residuals() {
  CriterionResult r{3, "Eigenfunction residuals (first two modes)", true, ""};
  const auto radii = log_grid(1e-3, 1e3, 60);
  double worst = 0.0;
  for (auto [N, s] : dimension_pairs()) {
    const HSParams P = bubble_params(N, s);
    worst = std::max(worst, pde_residual(bubble(P, 1.0, 1.0), P, Eigenmode::First, radii));
    worst = std::max(worst, pde_residual(bubble_dtau(P, 1.0), P, Eigenmode::Second, radii));
  }
  r.passed = worst <= 1e-6;
  r.detail = fmt("max residual %.3g (tol 1e-6)", worst);
  return r;
}

inline CriterionResult kappa_nonpositive() {
  CriterionResult r{4, "kappa <= 0 best constant", true, ""};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.1, 5.0), K(-3.0, 0.0);
  double worst = 0.0;
  double grid_gap = 0.0;
  for (int i = 0; i < 10; ++i) {
    const HSParams P = make_params(3, 1.0, 2, 2, U(rng), U(rng), i == 0 ? 0.0 : K(rng));
    const double expect = std::pow(std::max(P.lambda, P.mu), -2.0 / P.p) * mu_s(P.N, P.s);
    worst = std::max(worst, std::abs(best_constant(P) - expect) / expect);
    // No admissible t beats the semi-trivial value.
    const double floor = std::pow(std::max(P.lambda, P.mu), -2.0 / P.p);
    for (double t : log_grid(1e-4, 1e4, 400)) {
      const double D = detail::denominator(P, t);
      if (D > 0.0) grid_gap = std::min(grid_gap, (1.0 + t * t) / std::pow(D, 2.0 / P.p) - floor);
    }
  }
  r.passed = worst <= 4e-16 && grid_gap >= -1e-12;
  r.detail = fmt("max relative error %.3g, min g - max(lambda,mu)^(-2/p) on grid %.3g", worst,
                 grid_gap);
  return r;
}

inline CriterionResult constant_g() {
  CriterionResult r{5, "Constant g detection", true, ""};
  double worst = 0.0;
  bool labels = true;
  for (double kappa : {0.25, 1.0, 3.0}) {
    const HSParams P = make_params(3, 1.0, 2, 2, 2 * kappa, 2 * kappa, kappa);
    const double c = std::pow(2 * kappa, -2.0 / P.p);
    for (double t : log_grid(1e-3, 1e3, 100)) worst = std::max(worst, std::abs(g_eval(P, t) - c));
    labels = labels && classify(P).case_label == CaseLabel::ConstantG;
  }
  r.passed = worst <= 1e-12 && labels;
  r.detail = fmt("max |g - (2 kappa)^(-2/p)| %.3g, labels %s", worst, labels ? "ok" : "WRONG");
  return r;
}

inline CriterionResult golden_table() {
  CriterionResult r{6, "Classification golden table", true, ""};
  std::string bad;
  auto expect = [&](const std::string& name, const HSParams& P, CaseLabel want,
                    std::vector<ExtendedT> set) {
    const Classification c = classify(P);
    bool ok = c.case_label == want && c.minimizers && c.minimizers->points.size() == set.size();
    if (ok)
      for (const auto& t : set) ok = ok && c.minimizers->contains(t);
    if (!ok) bad += name + " ";
  };
  const auto d = degenerate_case_params(1.4, 1.6, 1.0);
  expect("I", case_instance("I").params, CaseLabel::I, {ExtendedT::finite(1.0)});
  expect("II.1", case_instance("II.1").params, CaseLabel::II_1, {ExtendedT::finite(d.t0)});
  expect("II.2", case_instance("II.2").params, CaseLabel::II_2, {ExtendedT::finite(0.0)});
  expect("II.3", case_instance("II.3").params, CaseLabel::II_3, {ExtendedT::infinity()});
  expect("II.4", case_instance("II.4").params, CaseLabel::II_4,
         {ExtendedT::finite(0.0), ExtendedT::infinity()});
  expect("II.4'", case_instance("II.4").params.swapped(), CaseLabel::II_4,
         {ExtendedT::finite(0.0), ExtendedT::infinity()});
  const HSParams P = case_instance("II.1").params;
  double low = 0.0;
  for (int k = 1; k <= 3; ++k) low = std::max(low, std::abs(g_eval(P, d.t0, k)));
  const double g4 = g_eval(P, d.t0, 4);
  r.passed = bad.empty() && low <= 1e-8 && g4 > 0.0;
  r.detail = fmt("mismatches [%s]; II.1 max|g'..g'''| %.3g, g'''' %.6g", bad.c_str(), low, g4);
  return r;
}

inline CriterionResult stationarity() {
  CriterionResult r{7, "Stationarity identities at interior minimizers", true, ""};
  std::vector<HSParams> sets{case_instance("I").params, case_instance("II.1").params};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.2, 4.0), A(1.1, 1.9);
  for (int i = 0; i < 30; ++i) {
    const double a = A(rng);
    sets.push_back(make_params(3, 1.0, a, 4.0 - a, U(rng), U(rng), U(rng)));
  }
  double eq = 0.0, ext = 0.0, ineq = std::numeric_limits<double>::infinity();
  int interior = 0;
  for (const auto& P : sets) {
    if (is_constant_g(P)) continue;
    for (const auto& pt : find_minimizers(P).points) {
      if (!pt.t.is_interior()) continue;
      ++interior;
      const double t = pt.t.value();
      const double e1 = P.lambda - P.mu * std::pow(t, P.p - 2) +
                        P.kappa * P.alpha * std::pow(t, P.beta) -
                        P.kappa * P.beta * std::pow(t, P.beta - 2);
      const double sc1 = P.lambda + P.mu * std::pow(t, P.p - 2) +
                         P.kappa * P.alpha * std::pow(t, P.beta) +
                         P.kappa * P.beta * std::pow(t, P.beta - 2);
      eq = std::max(eq, std::abs(e1) / sc1);
      const double lhs = P.lambda + P.mu * std::pow(t, P.p) + P.kappa * P.p * std::pow(t, P.beta);
      const double rhs = (1 + t * t) * (P.lambda + P.kappa * P.alpha * std::pow(t, P.beta));
      ext = std::max(ext, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
      const double g2 = P.alpha * (2 - P.alpha) * P.kappa * std::pow(t, P.beta) +
                        P.kappa * std::pow(t, P.beta - 2) * P.alpha * P.beta -
                        (P.p - 2) * P.lambda;
      ineq = std::min(ineq, g2 / std::max(1.0, (P.p - 2) * P.lambda));
    }
  }
  r.passed = interior >= 2 && eq <= 1e-9 && ext <= 1e-9 && ineq >= -1e-9;
  r.detail = fmt("%d interior minimizers; max rel |r(t0)| %.3g, extended identity %.3g, "
                 "min second-order margin %.3g",
                 interior, eq, ext, ineq);
  return r;
}

inline CriterionResult sharp_exponents() {
  CriterionResult r{8, "Sharp exponents from epsilon sweeps", true, ""};
  std::string detail;
  bool ok = true;
  for (const char* label : {"I", "II.1", "II.2"}) {
    const CaseInstance c = case_instance(label);
    const SweepReport s = stability_sweep(c.params, c.t0);
    const bool nd = std::string(label) == "I";
    const double want_def = nd ? 2.0 : 4.0;
    const double tol_def = nd ? 0.05 : 0.10;
    const double want_iota = nd ? 1.0 : 0.5;
    const bool pass = std::abs(s.slope_deficit - want_def) <= tol_def &&
                      std::abs(s.slope_distance - 2.0) <= 0.05 &&
                      std::abs(s.iota_estimate - want_iota) <= 0.05 &&
                      s.quadrature_deficit_rel_error <= 1e-7;
    ok = ok && pass;
    detail += fmt("%s: slopes %.4f/%.4f iota %.4f; ", label, s.slope_deficit, s.slope_distance,
                  s.iota_estimate);
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

inline CriterionResult trial_distance_formula() {
  CriterionResult r{9, "Trial-family manifold distance", true, ""};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> E(-0.3, 0.3), T(0.5, 2.0), A(0.5, 2.0);
  const std::vector<std::string> labels{"I", "II.1", "II.2", "II.4"};
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const CaseInstance c = case_instance(labels[i % labels.size()]);
    const MinimizerSet set = find_minimizers(c.params);
    const double a = A(rng);
    const double t0 = c.t0.value();
    const double b = std::max(0.0, a * (t0 + E(rng)));
    const double tau = T(rng);
    const RadialProfile w = bubble(c.params, 1.0, tau);
    const RadialProfile v = b > 0.0 ? scaled(w, b) : zero_profile();
    const double numeric = manifold_distance(scaled(w, a), v, c.params, set).distance;
    worst = std::max(worst, std::abs(numeric - trial_distance(c.params, a, b, set).distance));
  }
  r.passed = worst <= 1e-8;
  r.detail = fmt("max |numeric - closed form| %.3g over 20 pairs (tol 1e-8)", worst);
  return r;
}

// Nonnegative perturbed bubble a U(1, tau) + c bump.
inline RadialProfile perturbed_bubble(const HSParams& P, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> A(0.2, 2.0), T(0.3, 3.0), C(0.0, 0.5), L(0.2, 1.0);
  const double lo = L(rng);
  return linear_combination({{A(rng), bubble(P, 1.0, T(rng))}, {C(rng), bump(lo, lo + L(rng) + 0.3)}});
}

inline CriterionResult positivity() {
  CriterionResult r{10, "Deficit positivity and zero set", true, ""};
  std::mt19937_64 rng(10);
  const std::vector<std::string> labels{"I", "II.1", "II.2", "II.3", "II.4"};
  double lowest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const HSParams P = case_instance(labels[i % labels.size()]).params;
    const RadialProfile u = perturbed_bubble(P, rng);
    const RadialProfile v = perturbed_bubble(P, rng);
    lowest = std::min(lowest, deficit_pair(u, v, P).deficit);
  }
  double on_manifold = 0.0;
  std::uniform_real_distribution<double> K(0.3, 3.0);
  for (const auto& label : labels) {
    const HSParams P = case_instance(label).params;
    for (const auto& pt : find_minimizers(P).points) {
      const RadialProfile U = bubble(P, K(rng), K(rng));
      RadialProfile u = U, v = U;
      if (pt.t.is_infinite()) {
        u = zero_profile();
      } else if (pt.t.is_zero()) {
        v = zero_profile();
      } else {
        v = scaled(U, pt.t.value());
      }
      on_manifold = std::max(on_manifold, std::abs(deficit_pair(u, v, P).deficit));
    }
  }
  r.passed = lowest >= -1e-7 && on_manifold <= 1e-7;
  r.detail = fmt("min deficit over 50 pairs %.3g; max |deficit| on minimizers %.3g", lowest,
                 on_manifold);
  return r;
}

inline CriterionResult corollary() {
  CriterionResult r{11, "Weighted (ell) inequality via the ell-transform", true, ""};
  std::mt19937_64 rng(11);
  double worst_gap = 0.0, worst_cmp = -1.0, worst_member = 0.0;
  for (const char* label : {"I", "II.1"}) {
    const CaseInstance c = case_instance(label);
    for (double ell : {0.3, 0.5, 0.9}) {
      for (int i = 0; i < 3; ++i) {
        const RadialProfile u = perturbed_bubble(c.params, rng);
        const RadialProfile v = perturbed_bubble(c.params, rng);
        const CorollaryReport rep = corollary_check(u, v, ell, c.params);
        worst_gap = std::max(worst_gap, std::abs(rep.gap));
        worst_cmp = std::max(worst_cmp, rep.transformed.deficit - rep.weighted.deficit);
      }
      const RadialProfile w = ell_bubble(c.params, 1.3, 0.8, ell);
      const double d = weighted_deficit(w, scaled(w, c.t0.value()), ell, c.params).deficit;
      worst_member = std::max(worst_member, std::abs(d));
    }
  }
  r.passed = worst_cmp <= 1e-7 && worst_gap <= 1e-7 && worst_member <= 1e-7;
  r.detail = fmt("max delta(u~,v~) - delta_ell %.3g, max |gap| %.3g, max |delta_ell| on "
                 "weighted minimizers %.3g",
                 worst_cmp, worst_gap, worst_member);
  return r;
}

inline CriterionResult elementary() {
  CriterionResult r{12, "Elementary inequalities", true, ""};
  constexpr std::int64_t kSamples = 100000;
  std::int64_t violations = 0;
  int checks = 0;
  for (double m : {0.01, 0.1, 1.0}) {
    for (double iota : {3.0, 1.5}) {
      violations += lemma1_check(iota, m, kSamples).violations;
      ++checks;
    }
    const struct {
      IneqCase c;
      double a, b;
    } cases[] = {{IneqCase::L2_BOTH_GE2, 3.0, 2.5}, {IneqCase::L2_A2_B_GT2, 2.0, 3.0},
                 {IneqCase::L2_BOTH_EQ2, 2.0, 2.0}, {IneqCase::L2_MIXED, 1.5, 2.5},
                 {IneqCase::L2_B_EQ2, 1.5, 2.0},    {IneqCase::L2_BOTH_LT2, 1.4, 1.6}};
    for (const auto& k : cases) {
      violations += lemma2_check(k.c, k.a, k.b, m, kSamples).violations;
      ++checks;
    }
  }
  const bool hull = convex_hull_check(1.4, 1.6).all_inside;
  r.passed = violations == 0 && hull;
  r.detail = fmt("%lld violations over %d checks x 1e5 samples; convex hull %s",
                 static_cast<long long>(violations), checks, hull ? "ok" : "FAILED");
  return r;
}

}  // namespace acceptance

/// Runs every acceptance criterion. A criterion that throws is reported as failed.
inline std::vector<CriterionResult> run_acceptance() {
  using Fn = CriterionResult (*)();
  const std::vector<std::pair<int, Fn>> all{
      {1, acceptance::lieb_constant},   {2, acceptance::normalization},
      {3, acceptance::eigen_residuals}, {4, acceptance::kappa_nonpositive},
      {5, acceptance::constant_g},      {6, acceptance::golden_table},
      {7, acceptance::stationarity},    {8, acceptance::sharp_exponents},
      {9, acceptance::trial_distance_formula}, {10, acceptance::positivity},
      {11, acceptance::corollary},      {12, acceptance::elementary}};
  std::vector<CriterionResult> out;
  for (const auto& [id, fn] : all) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({id, "criterion " + std::to_string(id), false,
                     std::string("exception: ") + e.what()});
    }
  }
  return out;
}

}  // namespace hs2
