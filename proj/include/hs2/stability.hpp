#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "hs2/coupling.hpp"
#include "hs2/deficit.hpp"
#include "hs2/errors.hpp"
#include "hs2/params.hpp"
#include "hs2/radial.hpp"
#include "hs2/special.hpp"

namespace hs2 {

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Least squares line through (ln x, ln y).
inline LogLogFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw DomainError("fit_loglog: xs and ys differ in length");
  if (xs.size() < 4) throw DomainError("fit_loglog needs at least 4 points");
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw DomainError("fit_loglog: values must be positive (got x=" + std::to_string(xs[i]) +
                        ", y=" + std::to_string(ys[i]) + ")");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_loglog: all x values coincide");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i)
    fit.max_residual =
        std::max(fit.max_residual, std::abs(fit.intercept + fit.slope * lx[i] - ly[i]));
  return fit;
}

/// n geometric points from hi down to lo.
inline std::vector<double> geometric_grid(double hi, double lo, int n) {
  if (!(hi > lo && lo > 0.0) || n < 2) throw DomainError("geometric_grid: need hi > lo > 0, n >= 2");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = hi * std::pow(lo / hi, static_cast<double>(i) / (n - 1));
  return out;
}

inline std::vector<double> default_eps_grid() { return geometric_grid(1e-1, 1e-3, 12); }

/// g(t) - g(t0) as the integral of g' over [t0, t]. No cancellation between
/// two O(1) values of g, which matters when the difference is O(eps^4).
inline double g_increment(const HSParams& P, double t0, double t) {
  if (t == t0) return 0.0;
  auto dg = [&](double x) { return g_eval(P, x, 1); };
  return boost::math::quadrature::gauss<double, 30>::integrate(dg, t0, t);
}

/// delta((w, t w)) for a normalized bubble w, with S = g(t0) mu_s and t0 a global
/// minimizer: mu_s D(t)^{2/p} (g(t) - g(t0)).
inline double trial_deficit_along(const HSParams& P, double t0, double t) {
  return mu_s(P.N, P.s) * std::pow(detail::denominator(P, t), 2.0 / P.p) *
         g_increment(P, t0, t);
}

struct SweepReport {
  HSParams params_echo;
  ExtendedT t0 = ExtendedT::finite(0.0);
  std::string case_label;
  std::vector<double> epsilons;
  std::vector<double> deficits;
  std::vector<double> distances;
  double slope_deficit = 0.0;
  double slope_distance = 0.0;
  double residual_deficit = 0.0;
  double residual_distance = 0.0;
  double iota_estimate = 0.0;
  double classification_iota = 0.0;
  /// max over the grid of distance / deficit^iota: an empirical lower bound on
  /// any admissible stability constant, not the optimal constant.
  double observed_constant = 0.0;
  /// Relative gap between the closed form and the quadrature deficit at the largest eps.
  double quadrature_deficit_rel_error = 0.0;
  /// Absolute gap between the numeric and the closed-form distance at the largest eps.
  double numeric_distance_abs_error = 0.0;
};

struct SweepOptions {
  bool cross_check = true;
  MinimizerOptions minimizer{};
  DistanceSearchOptions distance{};
  /// The spot-check deficit is small against the energies it is the difference of.
  QuadratureOptions cross_check_quadrature{1e-13, 20000};
};

/// Perturbs the minimizer pair (w, t0 w), w = U(1,1), along (w, (t0 + eps) w),
/// and fits the log-log slopes of deficit and distance in eps. t0 = INFINITY
/// is handled by swapping the roles of u and v.
inline SweepReport stability_sweep(const HSParams& P, ExtendedT t0,
                                   std::vector<double> eps_grid = default_eps_grid(),
                                   const SweepOptions& opt = {}) {
  if (eps_grid.size() < 4) throw DomainError("stability_sweep needs at least 4 epsilons");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0 && eps_grid[i] <= 0.3))
      throw DomainError("stability_sweep: epsilons must lie in (0, 0.3]");
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))
      throw DomainError("stability_sweep: epsilons must be strictly decreasing");
  }
  const Classification cls = classify(P, opt.minimizer);
  if (!cls.minimizers || !cls.iota)
    throw DomainError(std::string("stability_sweep: no stability exponent for case ") +
                      to_string(cls.case_label));
  if (!cls.minimizers->contains(t0))
    throw DomainError("stability_sweep: t0 = " + t0.to_string() + " is not a minimizer of g");

  const HSParams W = t0.is_infinite() ? P.swapped() : P;
  const double tw = t0.is_infinite() ? 0.0 : t0.value();
  const MinimizerSet set = find_minimizers(W, opt.minimizer);

  SweepReport rep;
  rep.params_echo = P;
  rep.t0 = t0;
  rep.case_label = to_string(cls.case_label);
  rep.classification_iota = *cls.iota;
  rep.epsilons = eps_grid;
  for (double eps : eps_grid) {
    const double b = tw + eps;
    rep.deficits.push_back(trial_deficit_along(W, tw, b));
    rep.distances.push_back(trial_distance(W, 1.0, b, set).distance);
  }
  const LogLogFit fd = fit_loglog(rep.epsilons, rep.deficits);
  const LogLogFit fm = fit_loglog(rep.epsilons, rep.distances);
  rep.slope_deficit = fd.slope;
  rep.slope_distance = fm.slope;
  rep.residual_deficit = fd.max_residual;
  rep.residual_distance = fm.max_residual;
  rep.iota_estimate = fm.slope / fd.slope;
  for (std::size_t i = 0; i < eps_grid.size(); ++i)
    rep.observed_constant = std::max(
        rep.observed_constant, rep.distances[i] / std::pow(rep.deficits[i], rep.classification_iota));

  if (opt.cross_check) {
    const double b = tw + eps_grid.front();
    const RadialProfile w = bubble(W, 1.0, 1.0);
    const RadialProfile u = w;
    const RadialProfile v = scaled(w, b);
    const DeficitReport q = deficit_pair(u, v, W, opt.cross_check_quadrature);
    const double closed = rep.deficits.front();
    rep.quadrature_deficit_rel_error = std::abs(q.deficit - closed) / std::abs(closed);
    const ManifoldDistance md = manifold_distance(u, v, W, set, opt.distance);
    rep.numeric_distance_abs_error = std::abs(md.distance - rep.distances.front());
  }
  return rep;
}

}  // namespace hs2
