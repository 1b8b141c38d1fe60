#pragma once

#include <cmath>

#include "hs2/coupling.hpp"
#include "hs2/deficit.hpp"
#include "hs2/errors.hpp"
#include "hs2/params.hpp"
#include "hs2/radial.hpp"

namespace hs2 {

inline void check_ell(double ell) {
  if (!(ell > 0.0 && ell <= 1.0)) throw DomainError("ell must lie in (0, 1]");
}

/// u~(r) = ell^{1/2} u(r^{1/ell}).
inline RadialProfile ell_transform(const RadialProfile& u, double ell) {
  check_ell(ell);
  if (ell == 1.0) return u;
  const double e = 1.0 / ell;
  const double c = std::sqrt(ell);
  const ProfileShape& src = u.shape();
  ProfileShape shape;
  shape.value_exponent_at_zero = src.value_exponent_at_zero * e;
  shape.derivative_exponent_at_zero = e - 1.0 + src.derivative_exponent_at_zero * e;
  shape.decay_exponent = src.decay_exponent * e;
  shape.derivative_decay_exponent = (src.derivative_decay_exponent - 1.0) * e + 1.0;
  shape.has_second_derivative = src.has_second_derivative;
  for (double b : src.breakpoints) shape.breakpoints.push_back(std::pow(b, ell));
  return RadialProfile(
      [u, e, c](double r) {
        const double rho = std::pow(r, e);
        const RadialSample s = u(rho);
        const double j = e * std::pow(r, e - 1.0);  // d rho / dr
        const double jj = e * (e - 1.0) * std::pow(r, e - 2.0);
        return RadialSample{c * s.value, c * j * s.d1, c * (jj * s.d1 + j * j * s.d2)};
      },
      std::move(shape));
}

/// Weight exponents of the weighted inequality: energy |x|^{-(N-2)(1-ell)},
/// norms |x|^{-(N-s)(1-ell)-s}.
inline double ell_energy_weight(int N, double ell) { return (N - 2.0) * (1.0 - ell); }
inline double ell_norm_weight(int N, double s, double ell) { return (N - s) * (1.0 - ell) + s; }

/// c (1 + (lam r)^{(2-s) ell})^{-(N-2)/(2-s)} lam^{(N-2) ell / 2}: the extremals of
/// the weighted single-function inequality.
inline RadialProfile ell_bubble(const HSParams& P, double c, double lam, double ell) {
  check_ell(ell);
  if (!(lam > 0.0)) throw DomainError("ell_bubble requires lambda > 0");
  const double Q = (2.0 - P.s) * ell;
  const double b = (P.N - 2.0) / (2.0 - P.s);
  const double A = c * std::pow(lam, 0.5 * (P.N - 2.0) * ell);
  ProfileShape shape;
  shape.value_exponent_at_zero = 0.0;
  shape.derivative_exponent_at_zero = Q - 1.0;
  shape.decay_exponent = (P.N - 2.0) * ell;
  shape.derivative_decay_exponent = (P.N - 2.0) * ell + 1.0;
  shape.has_second_derivative = true;
  return RadialProfile(
      [=](double r) {
        const double z = lam * r;
        const double zq = std::pow(z, Q);
        const double base = 1.0 + zq;
        const double val = A * std::pow(base, -b);
        const double zq1 = std::pow(z, Q - 1.0);
        const double d1 = -A * b * Q * lam * zq1 * std::pow(base, -b - 1.0);
        const double d2 = -A * b * Q * lam * lam *
                          ((Q - 1.0) * std::pow(z, Q - 2.0) * std::pow(base, -b - 1.0) -
                           (b + 1.0) * Q * zq1 * zq1 * std::pow(base, -b - 2.0));
        return RadialSample{val, d1, d2};
      },
      shape);
}

/// Weighted deficit delta_ell(u, v): weighted energies minus
/// S ell^{2/p + 1} (weighted norm combination)^{2/p}.
inline DeficitReport weighted_deficit(const RadialProfile& u, const RadialProfile& v, double ell,
                                      const HSParams& P, const QuadratureOptions& opt = {}) {
  check_ell(ell);
  const double S = best_constant(P);
  const double se = ell_energy_weight(P.N, ell);
  const double sn = ell_norm_weight(P.N, P.s, ell);
  const double eu = weighted_energy(u, P.N, se, opt);
  const double ev = weighted_energy(v, P.N, se, opt);
  const double lam = P.lambda * weighted_power(u, P.p, P.N, sn, opt);
  const double mu = P.mu * weighted_power(v, P.p, P.N, sn, opt);
  const double mix = P.kappa * P.p * weighted_product(u, P.alpha, v, P.beta, P.N, sn, opt);
  return detail::assemble_deficit(eu, ev, lam, mu, mix, S, P.p,
                                  std::pow(ell, 2.0 / P.p + 1.0));
}

struct CorollaryReport {
  double ell = 1.0;
  DeficitReport weighted;     ///< delta_ell(u, v)
  DeficitReport transformed;  ///< delta(u~, v~)
  double gap = 0.0;           ///< delta_ell - delta(u~, v~); zero for radial inputs
  bool comparison_holds = false;  ///< delta(u~, v~) <= delta_ell + 1e-7
  bool nonnegative = false;       ///< delta_ell >= -1e-7
};

inline CorollaryReport corollary_check(const RadialProfile& u, const RadialProfile& v, double ell,
                                       const HSParams& P, const QuadratureOptions& opt = {}) {
  CorollaryReport rep;
  rep.ell = ell;
  rep.weighted = weighted_deficit(u, v, ell, P, opt);
  rep.transformed = deficit_pair(ell_transform(u, ell), ell_transform(v, ell), P, opt);
  rep.gap = rep.weighted.deficit - rep.transformed.deficit;
  rep.comparison_holds = rep.transformed.deficit <= rep.weighted.deficit + 1e-7;
  rep.nonnegative = rep.weighted.deficit >= -1e-7;
  return rep;
}

}  // namespace hs2
