#pragma once

#include <cmath>
#include <numbers>

#include "hs2/errors.hpp"

namespace hs2 {

/// Dimension and weight exponent, with the auxiliary exponent
/// a = (N - s)/(2 - s) that appears in the Gamma arguments.
struct DimensionPair {
  int N;
  double s;
  double a;
};

inline DimensionPair make_dimension_pair(int N, double s) {
  if (N < 3) throw DomainError("N must be >= 3");
  if (!(s > 0.0 && s < 2.0)) throw DomainError("s must lie in (0, 2)");
  return {N, s, (N - s) / (2.0 - s)};
}

/// ln Gamma(x) for x > 0. Backed by the C library lgamma, which is accurate
/// to a few ulp on the positive axis.
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
  return std::lgamma(x);
}

/// Surface measure of the unit sphere in R^N, 2 pi^{N/2} / Gamma(N/2).
inline double sphere_measure(int N) {
  if (N < 1) throw DomainError("sphere_measure requires N >= 1");
  const double half = 0.5 * N;
  return 2.0 * std::exp(half * std::log(std::numbers::pi) - log_gamma(half));
}

namespace detail {

// ln( omega_{N-1} / (2 - s) * Gamma(a)^2 / Gamma(2a) ), the log of the
// weighted L^p mass of the unnormalized profile (1 + r^{2-s})^{-(N-2)/(2-s)}.
inline double log_bubble_mass(const DimensionPair& d) {
  return std::log(sphere_measure(d.N)) - std::log(2.0 - d.s) +
         2.0 * log_gamma(d.a) - log_gamma(2.0 * d.a);
}

}  // namespace detail

/// Best constant mu_s(R^N) of the single Hardy-Sobolev inequality (Lieb).
inline double mu_s(int N, double s) {
  const DimensionPair d = make_dimension_pair(N, s);
  const double expo = (2.0 - s) / (N - s);
  return (N - 2.0) * (N - s) * std::exp(expo * detail::log_bubble_mass(d));
}

/// Normalization k0 making the weighted L^p norm of U(1,1) equal to one.
inline double bubble_norm_k0(int N, double s) {
  const DimensionPair d = make_dimension_pair(N, s);
  const double p = 2.0 * (N - s) / (N - 2);
  return std::exp(-detail::log_bubble_mass(d) / p);
}

}  // namespace hs2
