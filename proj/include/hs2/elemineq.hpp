#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hs2/errors.hpp"

namespace hs2 {

enum class IneqCase {
  L1_GE2,
  L1_LT2,
  L2_BOTH_GE2,
  L2_A2_B_GT2,
  L2_BOTH_EQ2,
  L2_MIXED,
  L2_B_EQ2,
  L2_BOTH_LT2,
};

inline const char* to_string(IneqCase c) {
  switch (c) {
    case IneqCase::L1_GE2: return "L1_GE2";
    case IneqCase::L1_LT2: return "L1_LT2";
    case IneqCase::L2_BOTH_GE2: return "L2_BOTH_GE2";
    case IneqCase::L2_A2_B_GT2: return "L2_A2_B_GT2";
    case IneqCase::L2_BOTH_EQ2: return "L2_BOTH_EQ2";
    case IneqCase::L2_MIXED: return "L2_MIXED";
    case IneqCase::L2_B_EQ2: return "L2_B_EQ2";
    case IneqCase::L2_BOTH_LT2: return "L2_BOTH_LT2";
  }
  return "?";
}

inline std::optional<IneqCase> ineq_case_from_string(const std::string& s) {
  for (IneqCase c : {IneqCase::L1_GE2, IneqCase::L1_LT2, IneqCase::L2_BOTH_GE2,
                     IneqCase::L2_A2_B_GT2, IneqCase::L2_BOTH_EQ2, IneqCase::L2_MIXED,
                     IneqCase::L2_B_EQ2, IneqCase::L2_BOTH_LT2})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

struct IneqResult {
  IneqCase case_id;
  double m = 0.0;
  double constant = 0.0;  ///< estimated C1 or C2
  std::int64_t samples = 0;
  std::int64_t violations = 0;
};

struct IneqOptions {
  int grid = 400;              ///< per axis
  double safety = 1.05;
  std::uint64_t seed = 20240601;
  unsigned threads = 0;        ///< 0: HS2_THREADS or hardware concurrency
};

namespace detail {

constexpr double kEqualRel = 1e-12;

inline bool near(double a, double b) { return std::abs(a - b) <= 1e-12; }

inline unsigned worker_count(unsigned requested) {
  unsigned n = requested;
  if (n == 0) {
    n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HS2_THREADS")) {
      const long cap = std::strtol(env, nullptr, 10);
      if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
  }
  return std::max(1u, n);
}

// Heavy-tailed reals: tan of a uniform angle.
inline double heavy_tailed(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  return std::tan(std::numbers::pi * U(rng));
}

// Counts samples where excess(a, b) > 0. Chunks have their own seeds, so the
// count does not depend on the number of threads.
inline std::int64_t count_violations(const std::function<double(double, double)>& excess,
                                     std::int64_t samples, const IneqOptions& opt) {
  constexpr std::int64_t kChunk = 4096;
  const std::int64_t chunks = (samples + kChunk - 1) / kChunk;
  std::atomic<std::int64_t> next{0};
  std::atomic<std::int64_t> total{0};
  auto work = [&] {
    for (std::int64_t c = next++; c < chunks; c = next++) {
      std::seed_seq seq{static_cast<std::uint64_t>(opt.seed), static_cast<std::uint64_t>(c)};
      std::mt19937_64 rng(seq);
      const std::int64_t n = std::min(kChunk, samples - c * kChunk);
      std::int64_t bad = 0;
      for (std::int64_t i = 0; i < n; ++i) {
        const double a = heavy_tailed(rng);
        const double b = heavy_tailed(rng);
        if (excess(a, b) > 0.0) ++bad;
      }
      total += bad;
    }
  };
  const unsigned nt = std::min<std::int64_t>(worker_count(opt.threads), std::max<std::int64_t>(chunks, 1));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < nt; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return total.load();
}

// Sup of required(a, b) over the Cartesian grid [-L, L]^2 and over the product
// of signed log-spaced values {0, +-10^(k/20)}, |k/20| <= 6 on each axis. The
// latter reaches the anisotropic limits (one variable huge, the other O(1))
// where several of the suprema live.
inline double sup_search(const std::function<double(double, double)>& required, double L,
                         int n) {
  double best = 0.0;
  auto take = [&](double a, double b) {
    const double r = required(a, b);
    if (std::isfinite(r)) best = std::max(best, r);
  };
  for (int i = 0; i < n; ++i) {
    const double a = -L + 2.0 * L * i / (n - 1);
    for (int j = 0; j < n; ++j) take(a, -L + 2.0 * L * j / (n - 1));
  }
  std::vector<double> axis{0.0};
  for (int k = -120; k <= 120; ++k) {
    const double v = std::pow(10.0, k / 20.0);
    axis.push_back(v);
    axis.push_back(-v);
  }
  for (double a : axis)
    for (double b : axis) take(a, b);
  return best;
}

inline double ap(double x, double e) { return std::pow(std::abs(x), e); }

struct Lemma2Form {
  std::function<double(double, double)> lhs;   // |1+y|^a |1+w|^b
  std::function<double(double, double)> poly;  // second-order part
  std::function<double(double, double)> terms; // remainder terms multiplying C2
};

inline void require_regime(IneqCase c, double a, double b) {
  const bool ok = [&] {
    switch (c) {
      case IneqCase::L2_BOTH_GE2: return a >= 2.0 && b >= 2.0;
      case IneqCase::L2_A2_B_GT2: return near(a, 2.0) && b > 2.0 && !near(b, 2.0);
      case IneqCase::L2_BOTH_EQ2: return near(a, 2.0) && near(b, 2.0);
      case IneqCase::L2_MIXED: return a > 1.0 && a < 2.0 && b >= 2.0;
      case IneqCase::L2_B_EQ2: return a > 1.0 && a < 2.0 && near(b, 2.0);
      case IneqCase::L2_BOTH_LT2: return a > 1.0 && a < 2.0 && b > 1.0 && b < 2.0;
      default: return false;
    }
  }();
  if (!ok)
    throw DomainError(std::string("(alpha, beta) = (") + std::to_string(a) + ", " +
                      std::to_string(b) + ") is outside the regime of " + to_string(c));
}

// The normalized (x = z = 1) form of each case.
inline Lemma2Form lemma2_form(IneqCase c, double a, double b, double m) {
  Lemma2Form f;
  f.lhs = [a, b](double y, double w) { return ap(1.0 + y, a) * ap(1.0 + w, b); };
  const double ca = a * (a - 1.0) / 2.0 + m;
  const double cb = b * (b - 1.0) / 2.0 + m;
  switch (c) {
    case IneqCase::L2_A2_B_GT2:
      f.poly = [b, cb](double y, double w) {
        return 1.0 + 2.0 * y + b * w + y * y + cb * w * w + 2.0 * b * y * w;
      };
      break;
    case IneqCase::L2_BOTH_EQ2:
      f.poly = [](double y, double w) {
        return 1.0 + 2.0 * y + 2.0 * w + y * y + w * w + 4.0 * y * w;
      };
      break;
    case IneqCase::L2_B_EQ2:
      f.poly = [a, ca](double y, double w) {
        return 1.0 + a * y + 2.0 * w + ca * y * y + w * w + 2.0 * a * y * w;
      };
      break;
    default:
      f.poly = [a, b, ca, cb](double y, double w) {
        return 1.0 + a * y + b * w + ca * y * y + cb * w * w + a * b * y * w;
      };
  }
  switch (c) {
    case IneqCase::L2_BOTH_GE2:
      f.terms = [a, b](double y, double w) {
        return ap(w, b) + ap(y, a) + ap(y, 1) * w * w + y * y * ap(w, 1) + ap(y, a) * ap(w, b);
      };
      break;
    case IneqCase::L2_A2_B_GT2:
      f.terms = [b](double y, double w) {
        return ap(w, b) + ap(y, 1) * w * w + y * y * ap(w, 1) + y * y * ap(w, b);
      };
      break;
    case IneqCase::L2_BOTH_EQ2:
      f.terms = [](double y, double w) {
        return ap(y, 1) * w * w + y * y * ap(w, 1) + y * y * w * w;
      };
      break;
    case IneqCase::L2_MIXED:
      f.terms = [a, b](double y, double w) {
        return ap(w, b) + ap(y, 1) * w * w + ap(y, a + 1) * ap(w, 1) + ap(y, a + 1) +
               ap(y, a) * ap(w, b);
      };
      break;
    case IneqCase::L2_B_EQ2:
      f.terms = [a](double y, double w) {
        return ap(y, 1) * w * w + ap(y, a + 1) + ap(y, a + 1) * ap(w, 1) + ap(y, a) * w * w;
      };
      break;
    case IneqCase::L2_BOTH_LT2:
      f.terms = [a, b](double y, double w) {
        return ap(w, b + 1) + ap(y, a + 1) + ap(y, 1) * ap(w, (b + 1) / 2) +
               ap(y, (a + 1) / 2) * ap(w, 1) + ap(y, a) * ap(w, b);
      };
      break;
    default:
      throw DomainError("not a two-variable inequality case");
  }
  return f;
}

}  // namespace detail

/// |x+y|^i - |x|^i against its second-order expansion plus a C1 remainder,
/// in the branch i >= 2 or 1 < i < 2. C1 is estimated by grid search and then
/// tested on heavy-tailed random pairs.
inline IneqResult lemma1_check(double iota, double m, std::int64_t samples,
                               const IneqOptions& opt = {}) {
  if (!(iota > 1.0)) throw DomainError("lemma1_check requires iota > 1");
  if (!(m > 0.0)) throw DomainError("lemma1_check requires m > 0");
  if (samples < 0) throw DomainError("samples must be >= 0");
  const double c2 = iota * (iota - 1.0) / 2.0 + m;
  auto lhs = [iota](double x, double y) { return detail::ap(x + y, iota) - detail::ap(x, iota); };
  auto linear = [iota](double x, double y) {
    return x == 0.0 ? 0.0 : iota * std::copysign(detail::ap(x, iota - 1.0), x) * y;
  };
  IneqResult res;
  res.m = m;
  res.samples = samples;
  std::function<double(double, double)> required, excess;
  if (iota >= 2.0) {
    res.case_id = IneqCase::L1_GE2;
    auto quad = [iota, c2](double x, double y) {
      return x == 0.0 && iota > 2.0 ? 0.0 : c2 * detail::ap(x, iota - 2.0) * y * y;
    };
    required = [=](double x, double y) {
      if (y == 0.0) return 0.0;
      const double L = lhs(x, y), R = linear(x, y) + quad(x, y);
      const double slack = detail::kEqualRel * (detail::ap(x, iota) + detail::ap(x + y, iota) + std::abs(R));
      return (L - R - slack) / detail::ap(y, iota);
    };
    res.constant = opt.safety * detail::sup_search(required, 10.0, opt.grid);
    const double C = res.constant;
    excess = [=](double x, double y) {
      const double L = lhs(x, y);
      const double R = linear(x, y) + quad(x, y) + C * detail::ap(y, iota);
      const double scale = detail::ap(x, iota) + detail::ap(x + y, iota) + std::abs(R);
      return L - R - detail::kEqualRel * scale;
    };
  } else {
    res.case_id = IneqCase::L1_LT2;
    required = [=](double x, double y) {
      if (y == 0.0) return 0.0;
      const double L = lhs(x, y), lin = linear(x, y);
      const double slack = detail::kEqualRel * (detail::ap(x, iota) + detail::ap(x + y, iota) + std::abs(lin));
      const double Q = (L - lin - slack) * (x * x + y * y) / (c2 * y * y);
      if (Q <= 0.0) return 0.0;
      return (std::pow(Q, 1.0 / iota) - std::abs(x)) / std::abs(y);
    };
    res.constant = opt.safety * detail::sup_search(required, 10.0, opt.grid);
    const double C = res.constant;
    excess = [=](double x, double y) {
      if (y == 0.0 && x == 0.0) return -1.0;
      const double L = lhs(x, y);
      const double R = linear(x, y) + c2 * std::pow(std::abs(x) + C * std::abs(y), iota) /
                                          (x * x + y * y) * y * y;
      const double scale = detail::ap(x, iota) + detail::ap(x + y, iota) + std::abs(R);
      return L - R - detail::kEqualRel * scale;
    };
  }
  res.violations = detail::count_violations(excess, samples, opt);
  return res;
}

/// |x+y|^a |z+w|^b - x^a z^b against its second-order expansion plus C2 times
/// the case's remainder terms, at x = z = 1 (both sides are jointly homogeneous).
inline IneqResult lemma2_check(IneqCase c, double alpha, double beta, double m,
                               std::int64_t samples, const IneqOptions& opt = {}) {
  if (c == IneqCase::L1_GE2 || c == IneqCase::L1_LT2)
    throw DomainError("lemma2_check takes a two-variable case (L2_*)");
  if (!(m > 0.0)) throw DomainError("lemma2_check requires m > 0");
  if (samples < 0) throw DomainError("samples must be >= 0");
  detail::require_regime(c, alpha, beta);
  const detail::Lemma2Form f = detail::lemma2_form(c, alpha, beta, m);
  auto required = [&](double y, double w) {
    const double T = f.terms(y, w);
    if (T == 0.0) return 0.0;
    const double L = f.lhs(y, w), P = f.poly(y, w);
    return (L - P - detail::kEqualRel * (std::abs(L) + std::abs(P))) / T;
  };
  IneqResult res;
  res.case_id = c;
  res.m = m;
  res.samples = samples;
  res.constant = opt.safety * detail::sup_search(required, 20.0, opt.grid);
  const double C = res.constant;
  auto excess = [&f, C](double y, double w) {
    const double L = f.lhs(y, w);
    const double P = f.poly(y, w);
    const double R = P + C * f.terms(y, w);
    return L - R - detail::kEqualRel * (std::abs(L) + std::abs(P) + std::abs(R));
  };
  res.violations = detail::count_violations(excess, samples, opt);
  return res;
}

/// Whether q lies in the convex hull of pts: some triangle of pts (Caratheodory)
/// holds q with nonnegative barycentric weights. Collinear triples are skipped,
/// points on the segment between two hull points are caught by any triangle
/// containing that segment.
inline bool in_convex_hull(const std::array<double, 2>& q,
                           const std::vector<std::array<double, 2>>& pts, double tol = 1e-12) {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(pts[i][0] - q[0]) <= tol && std::abs(pts[i][1] - q[1]) <= tol) return true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      // On segment ij.
      const double dx = pts[j][0] - pts[i][0], dy = pts[j][1] - pts[i][1];
      const double len2 = dx * dx + dy * dy;
      if (len2 > 0.0) {
        const double t = ((q[0] - pts[i][0]) * dx + (q[1] - pts[i][1]) * dy) / len2;
        const double ex = pts[i][0] + t * dx - q[0], ey = pts[i][1] + t * dy - q[1];
        if (t >= -tol && t <= 1.0 + tol && std::hypot(ex, ey) <= tol) return true;
      }
      for (std::size_t k = j + 1; k < n; ++k) {
        const auto &A = pts[i], &B = pts[j], &C = pts[k];
        const double det = (B[0] - A[0]) * (C[1] - A[1]) - (C[0] - A[0]) * (B[1] - A[1]);
        if (std::abs(det) <= tol) continue;
        const double l1 =
            ((q[0] - A[0]) * (C[1] - A[1]) - (C[0] - A[0]) * (q[1] - A[1])) / det;
        const double l2 =
            ((B[0] - A[0]) * (q[1] - A[1]) - (q[0] - A[0]) * (B[1] - A[1])) / det;
        if (l1 >= -tol && l2 >= -tol && 1.0 - l1 - l2 >= -tol) return true;
      }
    }
  return false;
}

struct HullCheck {
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<double, 2>> targets;
  std::vector<bool> inside;
  bool all_inside = false;
};

/// The exponent pairs that must be absorbed in the case alpha, beta in (1, 2).
inline HullCheck convex_hull_check(double alpha, double beta) {
  if (!(alpha > 1.0 && alpha < 2.0 && beta > 1.0 && beta < 2.0))
    throw DomainError("convex_hull_check requires alpha, beta in (1, 2)");
  HullCheck h;
  h.vertices = {{alpha + 1.0, 0.0},
                {0.0, beta + 1.0},
                {alpha, beta},
                {(alpha + 1.0) / 2.0, 1.0},
                {1.0, (beta + 1.0) / 2.0}};
  h.targets = {{(alpha + 1.0) / 2.0, (beta + 1.0) / 2.0},
               {alpha, (beta + 1.0) / 2.0},
               {(alpha + 1.0) / 2.0, beta}};
  h.all_inside = true;
  for (const auto& t : h.targets) {
    h.inside.push_back(in_convex_hull(t, h.vertices));
    h.all_inside = h.all_inside && h.inside.back();
  }
  return h;
}

}  // namespace hs2
