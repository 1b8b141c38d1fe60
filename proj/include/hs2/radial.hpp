#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "hs2/errors.hpp"
#include "hs2/params.hpp"
#include "hs2/quadrature.hpp"
#include "hs2/special.hpp"

namespace hs2 {

/// Value and derivatives of a radial function at one radius. d2 is NaN when
/// the profile does not provide a second derivative.
struct RadialSample {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = std::numeric_limits<double>::quiet_NaN();
};

/// Asymptotics used to decide integrability and to place quadrature cuts.
/// |u| <~ r^{value_exponent_at_zero}, |u'| <~ r^{derivative_exponent_at_zero}
/// near 0; |u| ~ r^{-decay_exponent}, |u'| ~ r^{-derivative_decay_exponent}
/// at infinity (infinite for compact support).
struct ProfileShape {
  double value_exponent_at_zero = 0.0;
  double derivative_exponent_at_zero = 0.0;
  double decay_exponent = std::numeric_limits<double>::infinity();
  double derivative_decay_exponent = std::numeric_limits<double>::infinity();
  bool has_second_derivative = false;
  std::vector<double> breakpoints;

  /// Bounded value and derivative at the origin.
  bool regular_at_zero() const {
    return value_exponent_at_zero >= 0.0 && derivative_exponent_at_zero >= 0.0;
  }
};

/// Immutable radial function r -> (u(r), u'(r)[, u''(r)]) on (0, inf).
class RadialProfile {
 public:
  using Eval = std::function<RadialSample(double)>;

  RadialProfile(Eval eval, ProfileShape shape)
      : eval_(std::make_shared<const Eval>(std::move(eval))), shape_(std::move(shape)) {}

  RadialSample operator()(double r) const { return (*eval_)(r); }
  const ProfileShape& shape() const noexcept { return shape_; }
  double decay_exponent() const noexcept { return shape_.decay_exponent; }

 private:
  std::shared_ptr<const Eval> eval_;
  ProfileShape shape_;
};

/// sum_i c_i u_i.
inline RadialProfile linear_combination(std::vector<std::pair<double, RadialProfile>> terms) {
  if (terms.empty()) throw DomainError("linear_combination needs at least one term");
  ProfileShape shape = terms.front().second.shape();
  shape.breakpoints.clear();
  for (const auto& [c, u] : terms) {
    const auto& s = u.shape();
    shape.value_exponent_at_zero = std::min(shape.value_exponent_at_zero, s.value_exponent_at_zero);
    shape.derivative_exponent_at_zero =
        std::min(shape.derivative_exponent_at_zero, s.derivative_exponent_at_zero);
    shape.decay_exponent = std::min(shape.decay_exponent, s.decay_exponent);
    shape.derivative_decay_exponent =
        std::min(shape.derivative_decay_exponent, s.derivative_decay_exponent);
    shape.has_second_derivative = shape.has_second_derivative && s.has_second_derivative;
    shape.breakpoints.insert(shape.breakpoints.end(), s.breakpoints.begin(), s.breakpoints.end());
  }
  return RadialProfile(
      [terms = std::move(terms)](double r) {
        RadialSample out{0.0, 0.0, 0.0};
        for (const auto& [c, u] : terms) {
          const RadialSample s = u(r);
          out.value += c * s.value;
          out.d1 += c * s.d1;
          out.d2 += c * s.d2;
        }
        return out;
      },
      std::move(shape));
}

inline RadialProfile scaled(const RadialProfile& u, double c) {
  return linear_combination({{c, u}});
}

inline RadialProfile zero_profile() {
  ProfileShape shape;
  shape.has_second_derivative = true;
  return RadialProfile([](double) { return RadialSample{0.0, 0.0, 0.0}; }, shape);
}

/// The extremal U(k, tau)(r) = k k0 (1 + (tau r)^{2-s})^{-(N-2)/(2-s)} tau^{(N-2)/2}.
inline RadialProfile bubble(const HSParams& P, double k, double tau) {
  if (!(tau > 0.0)) throw DomainError("bubble requires tau > 0");
  if (k == 0.0) throw DomainError("bubble requires k != 0");
  const double q = 2.0 - P.s;
  const double b = (P.N - 2.0) / q;
  const double amp = k * bubble_norm_k0(P.N, P.s) * std::pow(tau, 0.5 * (P.N - 2.0));
  ProfileShape shape;
  shape.value_exponent_at_zero = 0.0;
  shape.derivative_exponent_at_zero = 1.0 - P.s;
  shape.decay_exponent = P.N - 2.0;
  shape.derivative_decay_exponent = P.N - 1.0;
  shape.has_second_derivative = true;
  return RadialProfile(
      [=](double r) {
        const double z = tau * r;
        const double zq = std::pow(z, q);
        const double base = 1.0 + zq;
        const double v = amp * std::pow(base, -b);
        // bq = N - 2
        const double d1 = -amp * tau * (P.N - 2.0) * std::pow(z, q - 1.0) * std::pow(base, -b - 1.0);
        const double d2 = -amp * tau * tau * (P.N - 2.0) *
                          ((q - 1.0) * std::pow(z, q - 2.0) * std::pow(base, -b - 1.0) -
                           (b + 1.0) * q * std::pow(z, 2.0 * q - 2.0) * std::pow(base, -b - 2.0));
        return RadialSample{v, d1, d2};
      },
      shape);
}

/// d/dtau U(1, tau): the second eigenfunction direction of the linearized problem.
inline RadialProfile bubble_dtau(const HSParams& P, double tau) {
  if (!(tau > 0.0)) throw DomainError("bubble_dtau requires tau > 0");
  const double q = 2.0 - P.s;
  const double b = (P.N - 2.0) / q;
  const double c = bubble_norm_k0(P.N, P.s) * 0.5 * (P.N - 2.0) * std::pow(tau, 0.5 * P.N - 2.0);
  ProfileShape shape;
  shape.value_exponent_at_zero = 0.0;
  shape.derivative_exponent_at_zero = 1.0 - P.s;
  shape.decay_exponent = P.N - 2.0;
  shape.derivative_decay_exponent = P.N - 1.0;
  shape.has_second_derivative = true;
  return RadialProfile(
      [=](double r) {
        // c f(tau r) with f(z) = (1 + z^q)^{-b-1} (1 - z^q)
        const double z = tau * r;
        const double zq = std::pow(z, q);
        const double base = 1.0 + zq;
        const double f = std::pow(base, -b - 1.0) * (1.0 - zq);
        const double A = std::pow(z, q - 1.0);
        const double dA = (q - 1.0) * std::pow(z, q - 2.0);
        const double B = std::pow(base, -b - 2.0);
        const double dB = -(b + 2.0) * q * std::pow(z, q - 1.0) * std::pow(base, -b - 3.0);
        const double C = (b + 2.0) - b * zq;
        const double dC = -b * q * std::pow(z, q - 1.0);
        const double f1 = -q * A * B * C;
        const double f2 = -q * (dA * B * C + A * dB * C + A * B * dC);
        return RadialSample{c * f, c * tau * f1, c * tau * tau * f2};
      },
      shape);
}

/// C^1 polynomial bump ((r - lo)(hi - r))^2 on [lo, hi], zero elsewhere.
inline RadialProfile bump(double lo = 0.5, double hi = 2.0) {
  if (!(lo > 0.0 && hi > lo)) throw DomainError("bump requires 0 < lo < hi");
  ProfileShape shape;
  shape.value_exponent_at_zero = 0.0;
  shape.derivative_exponent_at_zero = 0.0;
  shape.has_second_derivative = true;
  shape.breakpoints = {lo, hi};
  return RadialProfile(
      [=](double r) {
        if (r <= lo || r >= hi) return RadialSample{0.0, 0.0, 0.0};
        const double P = (r - lo) * (hi - r);
        const double dP = lo + hi - 2.0 * r;
        return RadialSample{P * P, 2.0 * P * dP, 2.0 * (dP * dP - 2.0 * P)};
      },
      shape);
}

/// omega_{N-1} * integral of F(r) r^{N-1-sigma} dr, i.e. the integral over R^N
/// of F(|x|) |x|^{-sigma}.
inline QuadratureResult radial_integral(const std::function<double(double)>& F, int N,
                                        double sigma, const IntegrandShape& shape,
                                        const QuadratureOptions& opt = {}) {
  const double omega = sphere_measure(N);
  QuadratureOptions scaled_opt = opt;
  scaled_opt.tol = opt.tol / omega;
  QuadratureResult r = weighted_integral(F, N - 1.0 - sigma, shape, scaled_opt);
  r.value *= omega;
  r.abs_error_estimate *= omega;
  return r;
}

/// Weighted Dirichlet energy: integral over R^N of |x|^{-sigma} |grad u|^2.
inline double weighted_energy(const RadialProfile& u, int N, double sigma,
                              const QuadratureOptions& opt = {}) {
  const auto& s = u.shape();
  IntegrandShape shape{2.0 * s.derivative_exponent_at_zero, 2.0 * s.derivative_decay_exponent,
                       s.breakpoints};
  return radial_integral(
             [&](double r) {
               const double d = u(r).d1;
               return d * d;
             },
             N, sigma, shape, opt)
      .value;
}

inline double dirichlet_energy(const RadialProfile& u, int N, const QuadratureOptions& opt = {}) {
  return weighted_energy(u, N, 0.0, opt);
}

/// Integral over R^N of |x|^{-sigma} |u|^a |v|^b.
inline double weighted_product(const RadialProfile& u, double a, const RadialProfile& v, double b,
                               int N, double sigma, const QuadratureOptions& opt = {}) {
  const auto& su = u.shape();
  const auto& sv = v.shape();
  IntegrandShape shape;
  shape.exponent_at_zero = a * su.value_exponent_at_zero + b * sv.value_exponent_at_zero;
  shape.decay_at_infinity = a * su.decay_exponent + b * sv.decay_exponent;
  shape.breakpoints = su.breakpoints;
  shape.breakpoints.insert(shape.breakpoints.end(), sv.breakpoints.begin(), sv.breakpoints.end());
  return radial_integral(
             [&](double r) {
               const double x = std::abs(u(r).value);
               const double y = std::abs(v(r).value);
               if (x == 0.0 || y == 0.0) return 0.0;
               return std::pow(x, a) * std::pow(y, b);
             },
             N, sigma, shape, opt)
      .value;
}

/// Integral over R^N of |x|^{-sigma} |u|^a.
inline double weighted_power(const RadialProfile& u, double a, int N, double sigma,
                             const QuadratureOptions& opt = {}) {
  const auto& su = u.shape();
  IntegrandShape shape{a * su.value_exponent_at_zero, a * su.decay_exponent, su.breakpoints};
  return radial_integral(
             [&](double r) {
               const double x = std::abs(u(r).value);
               return x == 0.0 ? 0.0 : std::pow(x, a);
             },
             N, sigma, shape, opt)
      .value;
}

/// ||u||_{(s)} = (integral of |x|^{-s} |u|^p)^{1/p}.
inline double s_norm(const RadialProfile& u, const HSParams& P, const QuadratureOptions& opt = {}) {
  return std::pow(weighted_power(u, P.p, P.N, P.s, opt), 1.0 / P.p);
}

/// Integral of |x|^{-s} |u|^alpha |v|^beta.
inline double mixed_term(const RadialProfile& u, const RadialProfile& v, const HSParams& P,
                         const QuadratureOptions& opt = {}) {
  return weighted_product(u, P.alpha, v, P.beta, P.N, P.s, opt);
}

/// Energy inner product integral of grad u . grad v over R^N.
inline double energy_inner_product(const RadialProfile& u, const RadialProfile& v, int N,
                                   const QuadratureOptions& opt = {}) {
  const auto& su = u.shape();
  const auto& sv = v.shape();
  IntegrandShape shape;
  shape.exponent_at_zero = su.derivative_exponent_at_zero + sv.derivative_exponent_at_zero;
  shape.decay_at_infinity = su.derivative_decay_exponent + sv.derivative_decay_exponent;
  shape.breakpoints = su.breakpoints;
  shape.breakpoints.insert(shape.breakpoints.end(), sv.breakpoints.begin(), sv.breakpoints.end());
  return radial_integral([&](double r) { return u(r).d1 * v(r).d1; }, N, 0.0, shape, opt).value;
}

enum class Eigenmode { First, Second };

/// Largest relative residual over `radii` of
///   -w'' - (N-1)/r w' = Lambda r^{-s} U(1,1)^{p-2} w,
/// with Lambda = mu_s (First) or (p-1) mu_s (Second).
inline double pde_residual(const RadialProfile& w, const HSParams& P, Eigenmode mode,
                           std::span<const double> radii) {
  if (!w.shape().has_second_derivative)
    throw DomainError("pde_residual needs a profile with a second derivative");
  const double ms = mu_s(P.N, P.s);
  const double eigenvalue = mode == Eigenmode::First ? ms : (P.p - 1.0) * ms;
  const RadialProfile V = bubble(P, 1.0, 1.0);
  double worst = 0.0;
  for (double r : radii) {
    if (!(r > 0.0)) throw DomainError("pde_residual radii must be > 0");
    const RadialSample s = w(r);
    const double lhs = -s.d2 - (P.N - 1.0) / r * s.d1;
    const double rhs = eigenvalue * std::pow(r, -P.s) * std::pow(V(r).value, P.p - 2.0) * s.value;
    const double scale = std::abs(s.d2) + std::abs((P.N - 1.0) / r * s.d1) + std::abs(rhs);
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
  return out;
}

/// Sampled table "r,u,du" for debugging and plotting.
inline void write_profile_csv(std::ostream& os, const RadialProfile& u,
                              std::span<const double> radii) {
  os << "r,u,du\n";
  os.precision(17);
  for (double r : radii) {
    const RadialSample s = u(r);
    os << r << ',' << s.value << ',' << s.d1 << '\n';
  }
}

}  // namespace hs2
