#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hs2/hs2.hpp"

namespace hs2::cli {

using nlohmann::ordered_json;

enum ExitCode : int {
  kOk = 0,
  kDomainError = 1,
  kNumericalFailure = 2,
  kAcceptanceFailure = 3,
  kUsage = 64,
};

struct RunConfig {
  std::string subcommand;
  std::optional<std::string> preset;
  int N = 3;
  double s = 1.0, alpha = 2.0, beta = 2.0, lambda = 1.0, mu = 1.0, kappa = 1.0;
  std::string format = "json";
  std::string output;
  std::uint64_t seed = 20240601;
  // stability-sweep
  std::string t0;
  double eps_max = 1e-1, eps_min = 1e-3;
  int eps_count = 12;
  // deficit / transform-check: the pair (a U(1,tau) + bump_u B, b U(1,tau) + bump_v B)
  double a = 1.0, b = 1.0, tau = 1.0, bump_u = 0.0, bump_v = 0.0, ell = 0.5;
  // ineq-test
  std::string ineq_case = "all";
  double iota = 3.0, m = 0.1, ineq_alpha = 1.4, ineq_beta = 1.6;
  std::int64_t samples = 100000;
  // numerics
  double quad_tol = 1e-10;
};

inline ordered_json t_json(const ExtendedT& t) {
  if (t.is_infinite()) return "inf";
  return t.value();
}

inline ExtendedT parse_t(const std::string& s) {
  if (s == "inf" || s == "INFINITY" || s == "infinity") return ExtendedT::infinity();
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return ExtendedT::finite(v);
  } catch (const std::logic_error&) {
    throw DomainError("cannot parse t0 '" + s + "' (a number >= 0 or 'inf')");
  }
}

inline ordered_json params_json(const HSParams& P) {
  return {{"N", P.N},         {"s", P.s},   {"alpha", P.alpha}, {"beta", P.beta},
          {"lambda", P.lambda}, {"mu", P.mu}, {"kappa", P.kappa}, {"p", P.p}};
}

inline ordered_json minimizers_json(const MinimizerSet& set) {
  ordered_json pts = ordered_json::array();
  for (const auto& pt : set.points)
    pts.push_back({{"t", t_json(pt.t)},
                   {"g", pt.g_value},
                   {"degenerate", pt.degenerate},
                   {"g2", pt.second_derivative},
                   {"residual", pt.residual}});
  return pts;
}

inline ordered_json deficit_json(const DeficitReport& d) {
  return {{"energy_u", d.energy_u},
          {"energy_v", d.energy_v},
          {"lambda_term", d.lambda_term},
          {"mu_term", d.mu_term},
          {"mixed_term", d.mixed},
          {"best_constant_used", d.best_constant_used},
          {"deficit", d.deficit},
          {"relative_deficit", d.relative_deficit}};
}

// Flattens nested objects to dotted keys; arrays get an index.
inline void flatten(const ordered_json& j, const std::string& prefix,
                    std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

inline void emit(const ordered_json& j, const std::string& format, std::ostream& os) {
  if (format == "json") {
    os << j.dump(2) << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  if (format == "csv") {
    os << "key,value\n";
    for (const auto& [k, v] : rows) os << k << "," << v << "\n";
  } else {
    for (const auto& [k, v] : rows) os << k << ": " << v << "\n";
  }
}

inline HSParams resolve_params(const RunConfig& c, const CLI::App& app) {
  if (!c.preset) return make_params(c.N, c.s, c.alpha, c.beta, c.lambda, c.mu, c.kappa);
  HSParams P = case_instance(*c.preset).params;
  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--N")) P.N = c.N;
  if (given("--s")) P.s = c.s;
  if (given("--alpha")) P.alpha = c.alpha;
  if (given("--beta")) P.beta = c.beta;
  if (given("--lambda")) P.lambda = c.lambda;
  if (given("--mu")) P.mu = c.mu;
  if (given("--kappa")) P.kappa = c.kappa;
  return make_params(P.N, P.s, P.alpha, P.beta, P.lambda, P.mu, P.kappa);
}

inline std::pair<RadialProfile, RadialProfile> described_pair(const RunConfig& c,
                                                              const HSParams& P) {
  if (!(c.a >= 0.0 && c.b >= 0.0 && c.bump_u >= 0.0 && c.bump_v >= 0.0))
    throw DomainError("pair coefficients must be >= 0");
  auto make = [&](double coef, double bump_amp) {
    std::vector<std::pair<double, RadialProfile>> terms;
    if (coef > 0.0) terms.emplace_back(coef, bubble(P, 1.0, c.tau));
    if (bump_amp > 0.0) terms.emplace_back(bump_amp, bump());
    return terms.empty() ? zero_profile() : linear_combination(std::move(terms));
  };
  return {make(c.a, c.bump_u), make(c.b, c.bump_v)};
}

inline ordered_json cmd_best_constant(const HSParams& P) {
  const Classification c = classify(P);
  const double ms = mu_s(P.N, P.s);
  return {{"params", params_json(P)},
          {"mu_s", ms},
          {"S", c.best_constant},
          {"g_inf", c.best_constant / ms},
          {"case", to_string(c.case_label)}};
}

inline ordered_json cmd_classify(const HSParams& P) {
  const Classification c = classify(P);
  ordered_json j{{"case", to_string(c.case_label)}};
  j["iota"] = c.iota ? ordered_json(*c.iota) : ordered_json(nullptr);
  j["best_constant"] = c.best_constant;
  if (c.minimizers) {
    j["minimizers"] = minimizers_json(*c.minimizers);
    j["warnings"] = c.minimizers->warnings;
  }
  j["params"] = params_json(P);
  return j;
}

inline ordered_json cmd_minimize_g(const HSParams& P) {
  const MinimizerSet set = find_minimizers(P);
  return {{"g_inf", set.g_inf}, {"minimizers", minimizers_json(set)}, {"warnings", set.warnings}};
}

inline ordered_json cmd_deficit(const RunConfig& c, const HSParams& P) {
  const auto [u, v] = described_pair(c, P);
  QuadratureOptions q;
  q.tol = c.quad_tol;
  ordered_json j = deficit_json(deficit_pair(u, v, P, q));
  if (c.bump_u == 0.0 && c.bump_v == 0.0)
    j["closed_form_deficit"] = trial_deficit(P, c.a, c.b, best_constant(P));
  return j;
}

inline ExtendedT default_t0(const HSParams& P) {
  const Classification c = classify(P);
  if (!c.minimizers) throw DomainError("no minimizer set for this case");
  const auto deg = c.minimizers->degenerate_points();
  return deg.empty() ? c.minimizers->points.front().t : deg.front().t;
}

inline void cmd_stability_sweep(const RunConfig& c, const HSParams& P, std::ostream& os) {
  const ExtendedT t0 = c.t0.empty() ? default_t0(P) : parse_t(c.t0);
  const SweepReport r = stability_sweep(P, t0, geometric_grid(c.eps_max, c.eps_min, c.eps_count));
  if (c.format == "csv") {
    os.precision(17);
    os << "# case=" << r.case_label << " t0=" << r.t0.to_string()
       << " slope_deficit=" << r.slope_deficit << " slope_distance=" << r.slope_distance
       << " iota_estimate=" << r.iota_estimate << "\n";
    os << "epsilon,deficit,distance\n";
    for (std::size_t i = 0; i < r.epsilons.size(); ++i)
      os << r.epsilons[i] << "," << r.deficits[i] << "," << r.distances[i] << "\n";
    return;
  }
  ordered_json j{{"case", r.case_label},
                 {"t0", t_json(r.t0)},
                 {"params", params_json(r.params_echo)},
                 {"slope_deficit", r.slope_deficit},
                 {"slope_distance", r.slope_distance},
                 {"iota_estimate", r.iota_estimate},
                 {"classification_iota", r.classification_iota},
                 {"fit_residual_deficit", r.residual_deficit},
                 {"fit_residual_distance", r.residual_distance},
                 {"observed_constant", r.observed_constant},
                 {"quadrature_deficit_rel_error", r.quadrature_deficit_rel_error},
                 {"numeric_distance_abs_error", r.numeric_distance_abs_error},
                 {"epsilons", r.epsilons},
                 {"deficits", r.deficits},
                 {"distances", r.distances}};
  emit(j, c.format, os);
}

inline ordered_json cmd_transform_check(const RunConfig& c, const HSParams& P) {
  const auto [u, v] = described_pair(c, P);
  QuadratureOptions q;
  q.tol = c.quad_tol;
  const CorollaryReport r = corollary_check(u, v, c.ell, P, q);
  return {{"ell", r.ell},
          {"weighted", deficit_json(r.weighted)},
          {"transformed", deficit_json(r.transformed)},
          {"gap", r.gap},
          {"comparison_holds", r.comparison_holds},
          {"nonnegative", r.nonnegative}};
}

inline ordered_json ineq_json(const IneqResult& r) {
  return {{"case", to_string(r.case_id)},
          {"m", r.m},
          {"constant", r.constant},
          {"samples", r.samples},
          {"violations", r.violations}};
}

inline ordered_json cmd_ineq_test(const RunConfig& c) {
  IneqOptions opt;
  opt.seed = c.seed;
  ordered_json results = ordered_json::array();
  if (c.ineq_case == "all") {
    results.push_back(ineq_json(lemma1_check(3.0, c.m, c.samples, opt)));
    results.push_back(ineq_json(lemma1_check(1.5, c.m, c.samples, opt)));
    const std::vector<std::tuple<IneqCase, double, double>> cases{
        {IneqCase::L2_BOTH_GE2, 3.0, 2.5}, {IneqCase::L2_A2_B_GT2, 2.0, 3.0},
        {IneqCase::L2_BOTH_EQ2, 2.0, 2.0}, {IneqCase::L2_MIXED, 1.5, 2.5},
        {IneqCase::L2_B_EQ2, 1.5, 2.0},    {IneqCase::L2_BOTH_LT2, 1.4, 1.6}};
    for (const auto& [k, a, b] : cases)
      results.push_back(ineq_json(lemma2_check(k, a, b, c.m, c.samples, opt)));
  } else {
    const auto k = ineq_case_from_string(c.ineq_case);
    if (!k) throw DomainError("unknown inequality case '" + c.ineq_case + "'");
    if (*k == IneqCase::L1_GE2 || *k == IneqCase::L1_LT2) {
      if ((*k == IneqCase::L1_GE2) != (c.iota >= 2.0))
        throw DomainError("--iota does not match the selected branch");
      results.push_back(ineq_json(lemma1_check(c.iota, c.m, c.samples, opt)));
    } else {
      results.push_back(ineq_json(lemma2_check(*k, c.ineq_alpha, c.ineq_beta, c.m, c.samples, opt)));
    }
  }
  std::int64_t total = 0;
  for (const auto& r : results) total += r["violations"].get<std::int64_t>();
  ordered_json j{{"seed", c.seed}, {"results", results}, {"total_violations", total}};
  if (c.ineq_case == "all" || c.ineq_case == "L2_BOTH_LT2") {
    const double a = c.ineq_case == "all" ? 1.4 : c.ineq_alpha;
    const double b = c.ineq_case == "all" ? 1.6 : c.ineq_beta;
    j["convex_hull_ok"] = convex_hull_check(a, b).all_inside;
  }
  return j;
}

inline int cmd_selfcheck(const RunConfig& c, std::ostream& os) {
  const auto results = run_acceptance();
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  if (c.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& r : results)
      arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    os << ordered_json{{"all_passed", all}, {"criteria", arr}}.dump(2) << "\n";
  } else {
    for (const auto& r : results)
      os << (r.passed ? "PASS" : "FAIL") << " " << r.id << " " << r.name << ": " << r.detail
         << "\n";
  }
  return all ? kOk : kAcceptanceFailure;
}

/// Entry point; args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Best constants, minimizers and stability exponents of the coupled "
               "Hardy-Sobolev inequality"};
  app.name("hs2");
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value file supplying any flag; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);

  RunConfig c;
  std::string preset;
  app.add_option("--case", preset, "Parameter preset: I, II.1, II.2, II.3, II.4, CONSTANT_G");
  app.add_option("--N", c.N, "Dimension (default 3)");
  app.add_option("--s", c.s, "Singularity exponent in (0,2) (default 1)");
  app.add_option("--alpha", c.alpha, "Exponent alpha > 1 (default 2)");
  app.add_option("--beta", c.beta, "Exponent beta > 1 (default 2)");
  app.add_option("--lambda", c.lambda, "lambda > 0 (default 1)");
  app.add_option("--mu", c.mu, "mu > 0 (default 1)");
  app.add_option("--kappa", c.kappa, "Coupling kappa (default 1)");
  app.add_option("--format", c.format, "Output format (default json)")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--output", c.output, "Write output to this file instead of stdout");
  app.add_option("--seed", c.seed, "Seed for sampling subcommands");
  app.add_option("--t0", c.t0, "Minimizer to perturb: number or 'inf' (default: degenerate one)");
  app.add_option("--eps-max", c.eps_max, "Largest epsilon (default 0.1)");
  app.add_option("--eps-min", c.eps_min, "Smallest epsilon (default 1e-3)");
  app.add_option("--eps-count", c.eps_count, "Number of geometric epsilons (default 12)");
  app.add_option("--a", c.a, "Coefficient of U(1,tau) in u (default 1)");
  app.add_option("--b", c.b, "Coefficient of U(1,tau) in v (default 1)");
  app.add_option("--tau", c.tau, "Bubble concentration tau > 0 (default 1)");
  app.add_option("--bump-u", c.bump_u, "Amplitude of a bump added to u (default 0)");
  app.add_option("--bump-v", c.bump_v, "Amplitude of a bump added to v (default 0)");
  app.add_option("--ell", c.ell, "Transform parameter in (0,1] (default 0.5)");
  app.add_option("--ineq-case", c.ineq_case, "Inequality case name or 'all' (default all)");
  app.add_option("--iota", c.iota, "Exponent for the single-variable inequality (default 3)");
  app.add_option("--m", c.m, "Margin m > 0 (default 0.1)");
  app.add_option("--ineq-alpha", c.ineq_alpha, "alpha for two-variable cases (default 1.4)");
  app.add_option("--ineq-beta", c.ineq_beta, "beta for two-variable cases (default 1.6)");
  app.add_option("--samples", c.samples, "Random samples per case (default 100000)");
  app.add_option("--quad-tol", c.quad_tol, "Absolute quadrature tolerance (default 1e-10)");

  const std::vector<std::pair<std::string, std::string>> subs{
      {"best-constant", "Print mu_s, the best constant S and inf g"},
      {"classify", "Stability case, exponent iota and the minimizer set of g"},
      {"minimize-g", "Global minimizers of g with residuals"},
      {"deficit", "Deficit of the pair (a U + bump_u B, b U + bump_v B)"},
      {"stability-sweep", "Deficit and distance along (w, (t0 + eps) w) with fitted slopes"},
      {"transform-check", "Weighted inequality against its ell-transform"},
      {"ineq-test", "Estimate constants of the elementary inequalities and sample violations"},
      {"selfcheck", "Run the full acceptance suite"}};
  for (const auto& [name, help] : subs) app.add_subcommand(name, help)->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }
  for (const auto* sub : app.get_subcommands()) c.subcommand = sub->get_name();
  if (!preset.empty()) c.preset = preset;

  std::ofstream file;
  if (!c.output.empty()) {
    file.open(c.output);
    if (!file) {
      err << "error: cannot open output file " << c.output << "\n";
      return kDomainError;
    }
  }
  std::ostream& os = c.output.empty() ? out : file;

  try {
    if (c.subcommand == "selfcheck") return cmd_selfcheck(c, os);
    if (c.subcommand == "ineq-test") {
      emit(cmd_ineq_test(c), c.format, os);
      return kOk;
    }
    const HSParams P = resolve_params(c, app);
    if (c.subcommand == "best-constant") emit(cmd_best_constant(P), c.format, os);
    else if (c.subcommand == "classify") emit(cmd_classify(P), c.format, os);
    else if (c.subcommand == "minimize-g") emit(cmd_minimize_g(P), c.format, os);
    else if (c.subcommand == "deficit") emit(cmd_deficit(c, P), c.format, os);
    else if (c.subcommand == "stability-sweep") cmd_stability_sweep(c, P, os);
    else if (c.subcommand == "transform-check") emit(cmd_transform_check(c, P), c.format, os);
    return kOk;
  } catch (const SpecialCase& e) {
    err << "special case " << e.label() << ": " << e.what() << "\n";
    return kDomainError;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomainError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace hs2::cli
