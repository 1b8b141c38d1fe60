#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hs2/errors.hpp"

namespace hs2 {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int panels_used = 0;
};

/// Power-law behaviour of an integrand f(r) on (0, inf): |f| <~ r^{exponent_at_zero}
/// near 0 and |f| <~ r^{-decay_at_infinity} at infinity. Breakpoints mark kinks.
struct IntegrandShape {
  double exponent_at_zero = 0.0;
  double decay_at_infinity = std::numeric_limits<double>::infinity();
  std::vector<double> breakpoints;
};

struct QuadratureOptions {
  double tol = 1e-10;       ///< absolute tolerance
  int max_panels = 10000;   ///< per integral
};

namespace detail {

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15_panel(const F& f, double a, double b) {
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
  // Boost reports the error on the reference interval [-1, 1].
  return {a, b, v, err * 0.5 * (b - a)};
}

// Global adaptive Gauss-Kronrod over the union of [cuts[i], cuts[i+1]].
template <class F>
QuadratureResult adaptive_gk(const F& f, const std::vector<double>& cuts, double tol,
                             int max_panels) {
  std::priority_queue<Panel> heap;
  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = gk15_panel(f, cuts[i], cuts[i + 1]);
    total += p.value;
    error += p.error;
    heap.push(p);
  }
  int panels = static_cast<int>(heap.size());
  while (error > tol && panels < max_panels) {
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be split further; keep its contribution.
      heap.push({worst.a, worst.b, worst.value, 0.0});
      error -= worst.error;
      continue;
    }
    const Panel left = gk15_panel(f, worst.a, mid);
    const Panel right = gk15_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Re-sum to shed accumulated cancellation in the running totals.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {total, error, panels};
}

}  // namespace detail

/// Integral over (0, inf) of f(r) r^{weight_exponent} dr. The range is split at
/// r = 1 and (1, inf) is mapped onto (0, 1) by r -> 1/r; both halves use global
/// adaptive Gauss-Kronrod (G7/K15).
inline QuadratureResult weighted_integral(const std::function<double(double)>& f,
                                          double weight_exponent,
                                          const IntegrandShape& shape = {},
                                          const QuadratureOptions& opt = {}) {
  if (!(shape.exponent_at_zero + weight_exponent > -1.0))
    throw NonIntegrable("integrand is not integrable at r = 0 (effective exponent " +
                        std::to_string(shape.exponent_at_zero + weight_exponent) + ")");
  if (!(weight_exponent - shape.decay_at_infinity < -1.0))
    throw NonIntegrable("integrand is not integrable at infinity (effective exponent " +
                        std::to_string(weight_exponent - shape.decay_at_infinity) + ")");

  std::vector<double> inner{0.0, 1.0};
  std::vector<double> outer{0.0, 1.0};
  for (double b : shape.breakpoints) {
    if (b > 0.0 && b < 1.0) inner.push_back(b);
    if (b > 1.0 && std::isfinite(b)) outer.push_back(1.0 / b);
  }
  std::sort(inner.begin(), inner.end());
  std::sort(outer.begin(), outer.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  outer.erase(std::unique(outer.begin(), outer.end()), outer.end());

  auto near = [&](double r) { return f(r) * std::pow(r, weight_exponent); };
  auto far = [&](double t) {
    const double r = 1.0 / t;
    return f(r) * std::pow(t, -weight_exponent - 2.0);
  };
  const int budget = std::max(2, opt.max_panels / 2);
  const QuadratureResult a = detail::adaptive_gk(near, inner, 0.5 * opt.tol, budget);
  const QuadratureResult b = detail::adaptive_gk(far, outer, 0.5 * opt.tol, budget);
  QuadratureResult out{a.value + b.value, a.abs_error_estimate + b.abs_error_estimate,
                       a.panels_used + b.panels_used};
  if (!std::isfinite(out.value))
    throw ConvergenceFailure("weighted_integral: non-finite integrand values");
  if (out.abs_error_estimate > opt.tol)
    throw ConvergenceFailure("weighted_integral: tolerance " + std::to_string(opt.tol) +
                             " not met within the panel budget (estimate " +
                             std::to_string(out.abs_error_estimate) + ")");
  return out;
}

}  // namespace hs2
