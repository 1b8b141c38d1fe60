#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "hs2/coupling.hpp"
#include "hs2/errors.hpp"
#include "hs2/params.hpp"
#include "hs2/radial.hpp"
#include "hs2/special.hpp"

namespace hs2 {

struct DeficitReport {
  double energy_u = 0.0;
  double energy_v = 0.0;
  double lambda_term = 0.0;  ///< lambda * integral |x|^{-s} |u|^p
  double mu_term = 0.0;      ///< mu * integral |x|^{-s} |v|^p
  double mixed = 0.0;        ///< kappa p * integral |x|^{-s} |u|^alpha |v|^beta
  double best_constant_used = 0.0;
  double deficit = 0.0;
  double relative_deficit = 0.0;
};

namespace detail {

inline DeficitReport assemble_deficit(double eu, double ev, double lam, double mu, double mix,
                                      double S, double p, double norm_factor = 1.0) {
  DeficitReport r;
  r.energy_u = eu;
  r.energy_v = ev;
  r.lambda_term = lam;
  r.mu_term = mu;
  r.mixed = mix;
  r.best_constant_used = S;
  const double combo = std::max(0.0, lam + mu + mix);
  r.deficit = eu + ev - S * norm_factor * std::pow(combo, 2.0 / p);
  const double total = eu + ev;
  r.relative_deficit = total > 0.0 ? r.deficit / total : 0.0;
  return r;
}

}  // namespace detail

/// delta(u, v): energies minus S times the coupled weighted norm to the power 2/p.
inline DeficitReport deficit_pair(const RadialProfile& u, const RadialProfile& v,
                                  const HSParams& P, const QuadratureOptions& opt = {}) {
  const double S = best_constant(P);
  const double eu = dirichlet_energy(u, P.N, opt);
  const double ev = dirichlet_energy(v, P.N, opt);
  const double lam = P.lambda * weighted_power(u, P.p, P.N, P.s, opt);
  const double mu = P.mu * weighted_power(v, P.p, P.N, P.s, opt);
  const double mix = P.kappa * P.p * mixed_term(u, v, P, opt);
  return detail::assemble_deficit(eu, ev, lam, mu, mix, S, P.p);
}

/// Single-function deficit delta(u) = ||grad u||^2 - mu_s ||u||_{(s)}^2.
inline double deficit_single(const RadialProfile& u, int N, double s,
                             const QuadratureOptions& opt = {}) {
  const double p = hardy_sobolev_exponent(N, s);
  return dirichlet_energy(u, N, opt) -
         mu_s(N, s) * std::pow(weighted_power(u, p, N, s, opt), 2.0 / p);
}

/// A bubble-proportional pair (a w, b w), w = U(1, tau), perturbing minimizer t0_ref.
struct TrialPair {
  double a = 1.0;
  double b = 0.0;
  double tau = 1.0;
  ExtendedT t0_ref = ExtendedT::finite(0.0);
};

/// Closed form of delta(a w, b w) for a normalized bubble w:
/// (a^2 + b^2) mu_s - S (lambda a^p + mu b^p + kappa p a^alpha b^beta)^{2/p}.
inline double trial_deficit(const HSParams& P, double a, double b, double S) {
  if (!(a >= 0.0 && b >= 0.0)) throw DomainError("trial pair coefficients must be >= 0");
  const double ms = mu_s(P.N, P.s);
  double combo = P.lambda * std::pow(a, P.p) + P.mu * std::pow(b, P.p);
  if (a > 0.0 && b > 0.0) combo += P.kappa * P.p * std::pow(a, P.alpha) * std::pow(b, P.beta);
  return (a * a + b * b) * ms - S * std::pow(combo, 2.0 / P.p);
}

/// Optimal coefficient of the projection of (a w, b w) onto {(sigma w, t0 sigma w)}.
/// For t0 = INFINITY the projection is onto (0, sigma w) and sigma = b.
inline double sigma_projection(double a, double b, ExtendedT t0) {
  if (t0.is_infinite()) return b;
  const double t = t0.value();
  return (a + t * b) / (1.0 + t * t);
}

struct ManifoldDistance {
  double distance = 0.0;
  double normalized = 0.0;        ///< distance / (||grad u||^2 + ||grad v||^2)
  ExtendedT t = ExtendedT::finite(0.0);  ///< minimizer of g attaining the infimum
  int sign = 1;                   ///< branch (U, sign * t U)
  double k = 0.0;
  double tau = 1.0;
  bool hit_bracket = false;
};

/// Closed-form distance of (a w, b w) to the minimizer manifold, w a normalized
/// bubble: min over t' in the minimizer set of (a - sigma)^2 mu_s + (b - t' sigma)^2 mu_s.
inline ManifoldDistance trial_distance(const HSParams& P, double a, double b,
                                       const MinimizerSet& minset, double tau = 1.0) {
  const double ms = mu_s(P.N, P.s);
  ManifoldDistance best;
  best.distance = std::numeric_limits<double>::infinity();
  for (const auto& pt : minset.points) {
    const double sigma = sigma_projection(a, b, pt.t);
    double d;
    if (pt.t.is_infinite()) {
      d = a * a * ms;
    } else {
      const double t = pt.t.value();
      d = (a - sigma) * (a - sigma) * ms + (b - t * sigma) * (b - t * sigma) * ms;
    }
    if (d < best.distance) {
      best.distance = d;
      best.t = pt.t;
      best.k = sigma;
      best.tau = tau;
    }
  }
  const double total = (a * a + b * b) * ms;
  best.normalized = total > 0.0 ? best.distance / total : 0.0;
  return best;
}

struct DistanceSearchOptions {
  double log_tau_min = -6.0;
  double log_tau_max = 6.0;
  int scan_points = 49;
  QuadratureOptions quadrature{};
};

/// inf over (U(k,tau), +-t' U(k,tau)) in the minimizer manifold of
/// ||grad(u - U)||^2 + ||grad(v - (+-t') U)||^2, for radial u, v. k enters
/// quadratically and is eliminated in closed form; log tau is found by a
/// coarse scan followed by Brent's method.
inline ManifoldDistance manifold_distance(const RadialProfile& u, const RadialProfile& v,
                                          const HSParams& P, const MinimizerSet& minset,
                                          const DistanceSearchOptions& opt = {}) {
  const double ms = mu_s(P.N, P.s);
  const double eu = dirichlet_energy(u, P.N, opt.quadrature);
  const double ev = dirichlet_energy(v, P.N, opt.quadrature);

  struct Branch {
    ExtendedT t;
    int sign;
    double cu, cv;
  };
  std::vector<Branch> branches;
  for (const auto& pt : minset.points) {
    if (pt.t.is_infinite()) {
      branches.push_back({pt.t, 1, 0.0, 1.0});
    } else {
      branches.push_back({pt.t, 1, 1.0, pt.t.value()});
      if (pt.t.is_interior()) branches.push_back({pt.t, -1, 1.0, -pt.t.value()});
    }
  }

  ManifoldDistance best;
  best.distance = std::numeric_limits<double>::infinity();
  for (const auto& br : branches) {
    const double norm2 = br.cu * br.cu + br.cv * br.cv;
    auto projection = [&](double log_tau) {
      const RadialProfile W = bubble(P, 1.0, std::exp(log_tau));
      double ip = 0.0;
      if (br.cu != 0.0) ip += br.cu * energy_inner_product(u, W, P.N, opt.quadrature);
      if (br.cv != 0.0) ip += br.cv * energy_inner_product(v, W, P.N, opt.quadrature);
      return ip;
    };
    auto objective = [&](double x) {
      const double ip = projection(x);
      return eu + ev - ip * ip / (norm2 * ms);
    };
    const double step =
        (opt.log_tau_max - opt.log_tau_min) / std::max(1, opt.scan_points - 1);
    double x_best = opt.log_tau_min;
    double f_best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < opt.scan_points; ++i) {
      const double x = opt.log_tau_min + i * step;
      const double f = objective(x);
      if (f < f_best) {
        f_best = f;
        x_best = x;
      }
    }
    const double lo = std::max(opt.log_tau_min, x_best - step);
    const double hi = std::min(opt.log_tau_max, x_best + step);
    std::uintmax_t iters = 200;
    const auto [x_opt, f_opt] = boost::math::tools::brent_find_minima(objective, lo, hi, 40, iters);
    const double x = f_opt <= f_best ? x_opt : x_best;
    const double f = std::min(f_opt, f_best);
    if (f < best.distance) {
      best.distance = f;
      best.t = br.t;
      best.sign = br.sign;
      best.tau = std::exp(x);
      best.k = projection(x) / (norm2 * ms);
      best.hit_bracket = x - opt.log_tau_min < 1e-6 || opt.log_tau_max - x < 1e-6;
    }
  }
  if (best.hit_bracket)
    throw OptimizationFailure("manifold_distance: optimal log tau at the search bracket boundary");
  best.distance = std::max(0.0, best.distance);
  best.normalized = eu + ev > 0.0 ? best.distance / (eu + ev) : 0.0;
  return best;
}

}  // namespace hs2
