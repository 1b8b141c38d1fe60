#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "hs2/errors.hpp"
#include "hs2/params.hpp"
#include "hs2/special.hpp"

namespace hs2 {

/// A point of [0, inf]: either a finite t >= 0 or the symbol INFINITY.
class ExtendedT {
 public:
  static ExtendedT finite(double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
      throw DomainError("ExtendedT: finite values must be >= 0");
    return ExtendedT(t, false);
  }
  static ExtendedT infinity() { return ExtendedT(0.0, true); }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_zero() const noexcept { return !infinite_ && value_ == 0.0; }
  bool is_interior() const noexcept { return !infinite_ && value_ > 0.0; }
  /// Finite value; +inf for the point at infinity.
  double value() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }
  /// The image under t -> 1/t.
  ExtendedT reciprocal() const {
    if (infinite_) return finite(0.0);
    if (value_ == 0.0) return infinity();
    return finite(1.0 / value_);
  }
  std::string to_string() const;

 private:
  ExtendedT(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

inline std::string ExtendedT::to_string() const {
  if (infinite_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

namespace detail {

// Truncated Taylor series c[k] = f^{(k)}(t0)/k!, enough for fourth derivatives.
struct Jet {
  static constexpr int kOrder = 4;
  std::array<double, kOrder + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  // Expansion of coeff * t^e around t0 > 0.
  static Jet power(double coeff, double e, double t0) {
    Jet j;
    double binom = 1.0;
    for (int k = 0; k <= kOrder; ++k) {
      j.c[k] = coeff * binom * std::pow(t0, e - k);
      binom *= (e - k) / (k + 1);
    }
    return j;
  }
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f * c[k];
  }
};

inline Jet operator+(Jet a, const Jet& b) {
  for (int k = 0; k <= Jet::kOrder; ++k) a.c[k] += b.c[k];
  return a;
}

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet out;
  for (int k = 0; k <= Jet::kOrder; ++k)
    for (int j = 0; j <= k; ++j) out.c[k] += a.c[j] * b.c[k - j];
  return out;
}

// y = x^a with x.c[0] > 0.
inline Jet pow(const Jet& x, double a) {
  Jet y;
  y.c[0] = std::pow(x.c[0], a);
  for (int k = 1; k <= Jet::kOrder; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += (a * j - (k - j)) * x.c[j] * y.c[k - j];
    y.c[k] = acc / (k * x.c[0]);
  }
  return y;
}

// Generalized power series sum c_i t^{e_i} near t = 0.
struct PowerSeries {
  std::vector<std::pair<double, double>> terms;  // (exponent, coefficient)

  void add(double e, double c) {
    for (auto& [ex, co] : terms) {
      if (std::abs(ex - e) <= 1e-12) {
        co += c;
        return;
      }
    }
    terms.emplace_back(e, c);
  }

  // One-sided derivative of order k at 0; +-inf where a fractional power
  // below k makes it diverge (dominated by the smallest such exponent).
  double derivative_at_zero(int k) const {
    const double inf = std::numeric_limits<double>::infinity();
    std::optional<std::pair<double, double>> singular;
    double regular = 0.0;
    double scale = 0.0;
    for (const auto& [e, c] : terms) scale = std::max(scale, std::abs(c));
    for (const auto& [e, c] : terms) {
      if (std::abs(c) <= 1e-14 * scale) continue;
      const bool integer = std::abs(e - std::round(e)) <= 1e-12;
      if (integer) {
        if (std::lround(e) == k) {
          double f = 1.0;
          for (int i = 2; i <= k; ++i) f *= i;
          regular += c * f;
        }
      } else if (e < k && (!singular || e < singular->first)) {
        singular = std::make_pair(e, c);
      }
    }
    if (singular) {
      double falling = singular->second;
      for (int i = 0; i < k; ++i) falling *= singular->first - i;
      return falling > 0 ? inf : -inf;
    }
    return regular;
  }
};

inline double binomial(double a, int n) {
  double b = 1.0;
  for (int i = 0; i < n; ++i) b *= (a - i) / (i + 1);
  return b;
}

// Expansion of g near 0 through exponents <= 4.
inline PowerSeries g_series_at_zero(const HSParams& P) {
  const double q = -2.0 / P.p;
  const double cu = P.mu / P.lambda;             // coefficient of t^p in X
  const double cb = P.kappa * P.p / P.lambda;    // coefficient of t^beta in X
  const double lead = std::pow(P.lambda, q);
  constexpr double kMaxExponent = 4.0 + 1e-9;
  PowerSeries inner;
  for (int n = 0; n <= 4; ++n) {
    const double bn = binomial(q, n);
    for (int i = 0; i <= n; ++i) {
      const double e = P.p * i + P.beta * (n - i);
      if (e > kMaxExponent) continue;
      const double c = bn * binomial(n, i) * std::pow(cu, i) * std::pow(cb, n - i);
      inner.add(e, c);
    }
  }
  PowerSeries out;
  for (const auto& [e, c] : inner.terms) {
    out.add(e, lead * c);
    if (e + 2.0 <= kMaxExponent) out.add(e + 2.0, lead * c);
  }
  return out;
}

inline double denominator(const HSParams& P, double t) {
  return P.lambda + P.mu * std::pow(t, P.p) + P.kappa * P.p * std::pow(t, P.beta);
}

inline Jet stationarity_jet(const HSParams& P, double t) {
  return Jet::constant(P.lambda) + Jet::power(-P.mu, P.p - 2.0, t) +
         Jet::power(P.kappa * P.alpha, P.beta, t) +
         Jet::power(-P.kappa * P.beta, P.beta - 2.0, t);
}

inline Jet prefactor_jet(const HSParams& P, double t) {
  const Jet D = Jet::constant(P.lambda) + Jet::power(P.mu, P.p, t) +
                Jet::power(P.kappa * P.p, P.beta, t);
  return Jet::power(2.0, 1.0, t) * pow(D, -(2.0 / P.p + 1.0));
}

}  // namespace detail

/// r(t) = lambda - mu t^{p-2} + kappa alpha t^beta - kappa beta t^{beta-2};
/// g' = h r with h > 0, so interior critical points of g are zeros of r.
inline double stationarity_residual(const HSParams& P, double t, int order = 0) {
  if (!(t > 0.0)) throw DomainError("stationarity_residual requires t > 0");
  if (order < 0 || order > 4) throw DomainError("order must be in 0..4");
  return detail::stationarity_jet(P, t).derivative(order);
}

/// h(t) = 2t / (lambda + mu t^p + kappa p t^beta)^{2/p + 1}.
inline double stationarity_prefactor(const HSParams& P, double t, int order = 0) {
  if (!(t > 0.0)) throw DomainError("stationarity_prefactor requires t > 0");
  if (order < 0 || order > 4) throw DomainError("order must be in 0..4");
  return detail::prefactor_jet(P, t).derivative(order);
}

/// g(t) = (1 + t^2) / (lambda + mu t^p + kappa p t^beta)^{2/p} and its
/// derivatives up to order 4. Derivatives at t = 0 are the one-sided limits
/// (possibly +-infinity); at t = INFINITY only order 0 is defined.
/// With `reflected`, evaluates g~(t) = g(1/t) instead.
inline double g_eval(const HSParams& P, ExtendedT t, int order = 0,
                     bool reflected = false) {
  if (order < 0 || order > 4) throw DomainError("order must be in 0..4");
  if (reflected) return g_eval(P.swapped(), t, order, false);
  if (t.is_infinite()) {
    if (order != 0)
      throw DomainError("derivatives at t = INFINITY: use the reflected function");
    return std::pow(P.mu, -2.0 / P.p);
  }
  const double x = t.value();
  if (x == 0.0) {
    if (order == 0) return std::pow(P.lambda, -2.0 / P.p);
    return detail::g_series_at_zero(P).derivative_at_zero(order);
  }
  if (order == 0) return (1.0 + x * x) * std::pow(detail::denominator(P, x), -2.0 / P.p);
  // g^{(k)} = (h r)^{(k-1)}
  const detail::Jet hr = detail::prefactor_jet(P, x) * detail::stationarity_jet(P, x);
  return hr.derivative(order - 1);
}

inline double g_eval(const HSParams& P, double t, int order = 0) {
  return g_eval(P, ExtendedT::finite(t), order);
}

/// g~(t) = g(1/t) = (1 + t^2) / (mu + lambda t^p + kappa p t^alpha)^{2/p}.
inline double g_reflected(const HSParams& P, double t, int order = 0) {
  return g_eval(P, ExtendedT::finite(t), order, true);
}

/// True when (alpha, beta, lambda, mu) = (2, 2, 2 kappa, 2 kappa) within 1e-12,
/// in which case g is constant.
inline bool is_constant_g(const HSParams& P) {
  constexpr double tol = 1e-12;
  const double k2 = 2.0 * P.kappa;
  const double scale = std::max(1.0, std::abs(k2));
  return std::abs(P.alpha - 2.0) <= tol && std::abs(P.beta - 2.0) <= tol &&
         std::abs(P.lambda - k2) <= tol * scale && std::abs(P.mu - k2) <= tol * scale;
}

struct MinimizerPoint {
  ExtendedT t;
  double g_value;
  bool degenerate;
  /// g''(t) for finite t, g~''(0) for t = INFINITY.
  double second_derivative;
  /// r(t) for interior points, 0 at the endpoints.
  double residual;
};

struct MinimizerSet {
  std::vector<MinimizerPoint> points;
  double g_inf = 0.0;
  std::vector<std::string> warnings;

  bool contains(const ExtendedT& t, double tol = 1e-8) const {
    for (const auto& pt : points) {
      if (pt.t.is_infinite() || t.is_infinite()) {
        if (pt.t.is_infinite() && t.is_infinite()) return true;
        continue;
      }
      if (std::abs(pt.t.value() - t.value()) <= tol * std::max(1.0, t.value())) return true;
    }
    return false;
  }
  std::vector<MinimizerPoint> degenerate_points() const {
    std::vector<MinimizerPoint> out;
    for (const auto& pt : points)
      if (pt.degenerate) out.push_back(pt);
    return out;
  }
};

struct MinimizerOptions {
  double grid_min = 1e-6;
  double grid_max = 1e6;
  int points_per_decade = 1000;
  double residual_tol = 1e-12;
  double value_tol = 1e-10;
  double degeneracy_tol = 1e-8;
  double separation_tol = 1e-6;
};

namespace detail {

// Bracketed root of f on [a, b] with f(a) f(b) <= 0.
template <class F>
double bracketed_root(F f, double a, double b, double fa, double fb) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  std::uintmax_t iters = 200;
  auto [lo, hi] = boost::math::tools::toms748_solve(
      f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52), iters);
  return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

// At a multiple root of r (r = r' = 0) the sign-change polish is only
// accurate to ~eps^{1/3}; if r'' changes sign nearby, its simple zero
// pins the point down to full precision.
inline double refine_multiple_root(const HSParams& P, double t) {
  const double scale = std::abs(P.lambda) + std::abs(P.mu * std::pow(t, P.p - 2.0)) +
                       std::abs(P.kappa * P.alpha * std::pow(t, P.beta)) +
                       std::abs(P.kappa * P.beta * std::pow(t, P.beta - 2.0));
  const double r1 = stationarity_residual(P, t, 1);
  if (std::abs(t * r1) > 1e-6 * scale) return t;
  const double a = t * (1.0 - 1e-3);
  const double b = t * (1.0 + 1e-3);
  auto r2 = [&](double x) { return stationarity_residual(P, x, 2); };
  const double fa = r2(a);
  const double fb = r2(b);
  if (fa * fb > 0.0) return t;
  const double refined = bracketed_root(r2, a, b, fa, fb);
  const double r_old = std::abs(stationarity_residual(P, t));
  const double r_new = std::abs(stationarity_residual(P, refined));
  return r_new <= std::max(r_old, 1e-12 * scale) ? refined : t;
}

}  // namespace detail

/// All global minimizers of g on [0, inf] for kappa > 0.
inline MinimizerSet find_minimizers(const HSParams& P, const MinimizerOptions& opt = {}) {
  if (!(P.kappa > 0.0)) throw DomainError("find_minimizers requires kappa > 0");
  if (is_constant_g(P))
    throw SpecialCase("CONSTANT_G", "g is constant for (alpha,beta,lambda,mu) = (2,2,2k,2k)");

  struct Candidate {
    ExtendedT t;
    double g;
  };
  std::vector<Candidate> cands{{ExtendedT::finite(0.0), g_eval(P, ExtendedT::finite(0.0))},
                               {ExtendedT::infinity(), g_eval(P, ExtendedT::infinity())}};

  auto r = [&](double t) { return stationarity_residual(P, t); };
  const double lo = std::log10(opt.grid_min);
  const double hi = std::log10(opt.grid_max);
  const int n = static_cast<int>(std::lround((hi - lo) * opt.points_per_decade));
  double t_prev = opt.grid_min;
  double r_prev = r(t_prev);
  std::vector<double> roots;
  for (int i = 1; i <= n; ++i) {
    const double t = std::pow(10.0, lo + (hi - lo) * i / n);
    const double rt = r(t);
    if (r_prev == 0.0) {
      roots.push_back(t_prev);
    } else if (r_prev * rt < 0.0) {
      roots.push_back(detail::bracketed_root(r, t_prev, t, r_prev, rt));
    }
    t_prev = t;
    r_prev = rt;
  }
  if (r_prev == 0.0) roots.push_back(t_prev);

  for (double t : roots) {
    t = detail::refine_multiple_root(P, t);
    cands.push_back({ExtendedT::finite(t), g_eval(P, ExtendedT::finite(t))});
  }

  MinimizerSet out;
  out.g_inf = std::min_element(cands.begin(), cands.end(), [](auto& a, auto& b) {
                return a.g < b.g;
              })->g;
  const double tol = opt.value_tol * std::max(1.0, std::abs(out.g_inf));
  for (const auto& c : cands) {
    if (c.g - out.g_inf > tol) continue;
    MinimizerPoint pt{c.t, c.g, false, 0.0, 0.0};
    if (c.t.is_infinite()) {
      pt.second_derivative = g_reflected(P, 0.0, 2);
    } else {
      pt.second_derivative = g_eval(P, c.t, 2);
      if (c.t.is_interior()) pt.residual = stationarity_residual(P, c.t.value());
    }
    pt.degenerate = std::abs(pt.second_derivative) <= opt.degeneracy_tol;
    out.points.push_back(pt);
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const MinimizerPoint& a, const MinimizerPoint& b) {
              return a.t.value() < b.t.value();
            });
  for (std::size_t i = 1; i < out.points.size(); ++i) {
    const auto& a = out.points[i - 1].t;
    const auto& b = out.points[i].t;
    if (!b.is_infinite() && b.value() - a.value() < opt.separation_tol)
      out.warnings.push_back("NumericalWarning: minimizers " + a.to_string() + " and " +
                             b.to_string() + " are closer than 1e-6");
  }
  return out;
}

enum class CaseLabel { I, II_1, II_2, II_3, II_4, ConstantG, KappaNonpositive };

inline const char* to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::I: return "I";
    case CaseLabel::II_1: return "II.1";
    case CaseLabel::II_2: return "II.2";
    case CaseLabel::II_3: return "II.3";
    case CaseLabel::II_4: return "II.4";
    case CaseLabel::ConstantG: return "CONSTANT_G";
    case CaseLabel::KappaNonpositive: return "KAPPA_NONPOSITIVE";
  }
  return "?";
}

inline std::optional<CaseLabel> case_label_from_string(const std::string& s) {
  for (CaseLabel c : {CaseLabel::I, CaseLabel::II_1, CaseLabel::II_2, CaseLabel::II_3,
                      CaseLabel::II_4, CaseLabel::ConstantG, CaseLabel::KappaNonpositive})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

struct Classification {
  CaseLabel case_label;
  std::optional<double> iota;               ///< 1 or 0.5; empty when not applicable
  std::optional<MinimizerSet> minimizers;   ///< empty for CONSTANT_G / kappa <= 0
  double best_constant;
};

/// Parameters (lambda, mu) and the point t0 = sqrt((2 - beta)/(2 - alpha))
/// at which g has a degenerate interior minimizer.
struct DegenerateCase {
  double lambda;
  double mu;
  double t0;
};

inline DegenerateCase degenerate_case_params(double alpha, double beta, double kappa) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("alpha must lie in (1, 2)");
  if (!(beta > 1.0 && beta < 2.0)) throw DomainError("beta must lie in (1, 2)");
  if (!(kappa > 0.0)) throw DomainError("kappa must be > 0");
  const double p = alpha + beta;
  const double t0 = std::sqrt((2.0 - beta) / (2.0 - alpha));
  return {2.0 * kappa * alpha / (p - 2.0) * std::pow(t0, beta - 2.0),
          2.0 * kappa * beta / (p - 2.0) * std::pow(t0, 2.0 - alpha), t0};
}

/// Bivariate best constant S_{alpha,beta,lambda,mu}(R^N).
inline double best_constant(const HSParams& P, const MinimizerOptions& opt = {}) {
  const double ms = mu_s(P.N, P.s);
  if (P.kappa <= 0.0) return std::pow(std::max(P.lambda, P.mu), -2.0 / P.p) * ms;
  if (is_constant_g(P)) return std::pow(2.0 * P.kappa, -2.0 / P.p) * ms;
  return find_minimizers(P, opt).g_inf * ms;
}

namespace detail {

inline bool approx(double a, double b, double tol = 1e-10) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool le(double a, double b) { return a < b || approx(a, b); }

// Case label whose parameter conditions hold, if any.
inline std::optional<CaseLabel> degenerate_row(const HSParams& P) {
  const double k2 = 2.0 * P.kappa;
  if (P.alpha < 2.0 && P.beta < 2.0 && !approx(P.alpha, 2.0) && !approx(P.beta, 2.0)) {
    const auto d = degenerate_case_params(P.alpha, P.beta, P.kappa);
    if (approx(P.lambda, d.lambda) && approx(P.mu, d.mu)) return CaseLabel::II_1;
  }
  if (approx(P.beta, 2.0) && le(2.0, P.alpha) && approx(P.lambda, k2) && P.mu < P.lambda &&
      !approx(P.mu, P.lambda))
    return CaseLabel::II_2;
  if (approx(P.alpha, 2.0) && le(2.0, P.beta) && approx(P.mu, k2) && P.lambda < P.mu &&
      !approx(P.lambda, P.mu))
    return CaseLabel::II_3;
  const double lo = std::min(P.alpha, P.beta);
  const double hi = std::max(P.alpha, P.beta);
  if (approx(lo, 2.0) && hi > 2.0 && !approx(hi, 2.0) && approx(P.lambda, k2) &&
      approx(P.mu, k2))
    return CaseLabel::II_4;
  return std::nullopt;
}

}  // namespace detail

/// Stability case of the parameters and the resulting exponent iota.
inline Classification classify(const HSParams& P, const MinimizerOptions& opt = {}) {
  const double ms = mu_s(P.N, P.s);
  if (P.kappa <= 0.0)
    return {CaseLabel::KappaNonpositive, std::nullopt, std::nullopt,
            std::pow(std::max(P.lambda, P.mu), -2.0 / P.p) * ms};
  if (is_constant_g(P))
    return {CaseLabel::ConstantG, std::nullopt, std::nullopt,
            std::pow(2.0 * P.kappa, -2.0 / P.p) * ms};

  MinimizerSet set = find_minimizers(P, opt);
  const double S = set.g_inf * ms;
  const auto degenerate = set.degenerate_points();
  if (degenerate.empty()) return {CaseLabel::I, 1.0, std::move(set), S};

  const auto row = detail::degenerate_row(P);
  if (!row)
    throw InconsistentClassification(
        "degenerate minimizer found but no degenerate-case parameter row matches");

  // The minimizer set must agree with the row's prediction.
  auto has = [&](ExtendedT t) { return set.contains(t); };
  bool consistent = false;
  switch (*row) {
    case CaseLabel::II_1: {
      const auto d = degenerate_case_params(P.alpha, P.beta, P.kappa);
      consistent = set.points.size() == 1 && has(ExtendedT::finite(d.t0)) &&
                   set.points.front().degenerate;
      break;
    }
    case CaseLabel::II_2:
      consistent = set.points.size() == 1 && set.points.front().t.is_zero() &&
                   set.points.front().degenerate;
      break;
    case CaseLabel::II_3:
      consistent = set.points.size() == 1 && set.points.front().t.is_infinite() &&
                   set.points.front().degenerate;
      break;
    case CaseLabel::II_4:
      consistent = set.points.size() == 2 && has(ExtendedT::finite(0.0)) &&
                   has(ExtendedT::infinity()) && degenerate.size() == 1;
      break;
    default:
      break;
  }
  if (!consistent)
    throw InconsistentClassification(std::string("parameters match row ") + to_string(*row) +
                                     " but the computed minimizer set disagrees");
  return {*row, 0.5, std::move(set), S};
}

}  // namespace hs2
