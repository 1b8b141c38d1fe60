#pragma once

#include <cmath>
#include <string>

#include "hs2/errors.hpp"

namespace hs2 {

/// Absolute tolerance for alpha + beta == 2*(s).
inline constexpr double kExponentTolerance = 1e-12;

/// Hardy-Sobolev exponent 2*(s) = 2(N - s)/(N - 2).
inline double hardy_sobolev_exponent(int N, double s) {
  return 2.0 * (N - s) / (N - 2);
}

/// Parameters of the coupled inequality. Construct through make_params.
struct HSParams {
  int N = 3;
  double s = 1.0;
  double alpha = 2.0;
  double beta = 2.0;
  double lambda = 1.0;
  double mu = 1.0;
  double kappa = 1.0;
  double p = 4.0;

  /// The same problem with the roles of u and v exchanged.
  HSParams swapped() const {
    HSParams out = *this;
    std::swap(out.alpha, out.beta);
    std::swap(out.lambda, out.mu);
    return out;
  }
};

inline HSParams make_params(int N, double s, double alpha, double beta,
                            double lambda, double mu, double kappa) {
  if (N < 3) throw DomainError("N must be an integer >= 3");
  if (!(s > 0.0 && s < 2.0)) throw DomainError("s must lie in (0, 2)");
  if (!(alpha > 1.0)) throw DomainError("alpha must be > 1");
  if (!(beta > 1.0)) throw DomainError("beta must be > 1");
  if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
  if (!(mu > 0.0)) throw DomainError("mu must be > 0");
  if (!std::isfinite(kappa)) throw DomainError("kappa must be finite");
  const double p = hardy_sobolev_exponent(N, s);
  if (std::abs(alpha + beta - p) > kExponentTolerance)
    throw DomainError("alpha+beta must equal 2*(s) = " + std::to_string(p));
  return HSParams{N, s, alpha, beta, lambda, mu, kappa, p};
}

}  // namespace hs2
