#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cwm/model.hpp"

namespace cwm {

class UnboundedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// max{c*x + d, 0}; c must be non-zero.
struct Hinge {
  double c = 0.0;
  double d = 0.0;

  double breakpoint() const { return -d / c; }
  double operator()(double x) const { return std::max(c * x + d, 0.0); }
};

// Convex function of one variable: sum of hinges + slope * x + offset.
struct PiecewiseAffine {
  std::vector<Hinge> hinges;
  double slope = 0.0;
  double offset = 0.0;

  double operator()(double x) const {
    double value = offset + slope * x;
    for (const Hinge& h : hinges) value += h(x);
    return value;
  }
};

enum class MinimizerKind {
  kSingleton,
  kInterval,
  kHalfInfiniteLeft,   // (-inf, hi]
  kHalfInfiniteRight,  // [lo, +inf)
  kAllReals,
  kUnboundedBelow,
};

inline const char* to_string(MinimizerKind kind) {
  switch (kind) {
    case MinimizerKind::kSingleton: return "singleton";
    case MinimizerKind::kInterval: return "interval";
    case MinimizerKind::kHalfInfiniteLeft: return "half_infinite_left";
    case MinimizerKind::kHalfInfiniteRight: return "half_infinite_right";
    case MinimizerKind::kAllReals: return "all_reals";
    case MinimizerKind::kUnboundedBelow: return "unbounded_below";
  }
  return "unknown";
}

struct MinimizerSet {
  MinimizerKind kind = MinimizerKind::kAllReals;
  double lo = -kInf;
  double hi = kInf;

  static MinimizerSet singleton(double x) { return {MinimizerKind::kSingleton, x, x}; }
  static MinimizerSet unbounded() { return {MinimizerKind::kUnboundedBelow, -kInf, kInf}; }

  friend bool operator==(const MinimizerSet&, const MinimizerSet&) = default;
};

// Restriction of the objective to phi_i, up to an additive constant.
// `activity` must hold v_j + A_:j'phi + B_:j'lam for the current point.
inline PiecewiseAffine build_restriction_phi(const ProblemSpec& spec, std::span<const double> phi,
                                             std::span<const double> activity, std::size_t i) {
  if (i >= spec.m()) {
    throw std::out_of_range("phi index " + std::to_string(i) + " out of range");
  }
  PiecewiseAffine f;
  const auto row = spec.A().row(i);
  f.hinges.reserve(row.size() + 1);
  f.hinges.push_back({-1.0, spec.w()[i]});
  for (const SparseEntry& e : row) {
    f.hinges.push_back({e.value, activity[e.index] - e.value * phi[i]});
  }
  f.slope = spec.a()[i];
  return f;
}

// Restriction of the objective to lam_i, up to an additive constant.
inline PiecewiseAffine build_restriction_lambda(const ProblemSpec& spec,
                                                std::span<const double> lam,
                                                std::span<const double> activity,
                                                std::size_t i) {
  if (i >= spec.n()) {
    throw std::out_of_range("lambda index " + std::to_string(i) + " out of range");
  }
  PiecewiseAffine f;
  const auto row = spec.B().row(i);
  f.hinges.reserve(row.size());
  for (const SparseEntry& e : row) {
    f.hinges.push_back({e.value, activity[e.index] - e.value * lam[i]});
  }
  f.slope = spec.b()[i];
  return f;
}

// Exact minimizer set of f on [lo, hi]. Breakpoints are scanned left to
// right; the set is where the subgradient contains zero, projected onto the
// box. Slopes are compared to zero exactly when all |c| = 1 and the linear
// slope is an integer, otherwise with an absolute tolerance of 1e-12.
inline MinimizerSet minimize_on_box(const PiecewiseAffine& f, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("minimize_on_box requires lo < hi");

  struct Kink {
    double x;
    double jump;
  };
  std::vector<Kink> kinks;
  kinks.reserve(f.hinges.size());
  double left_slope = f.slope;
  bool integral = std::isfinite(f.slope) && f.slope == std::floor(f.slope);
  for (const Hinge& h : f.hinges) {
    if (h.c == 0.0) throw std::invalid_argument("hinge with zero coefficient");
    kinks.push_back({h.breakpoint(), std::abs(h.c)});
    if (h.c < 0.0) left_slope += h.c;
    integral = integral && std::abs(h.c) == 1.0;
  }
  std::sort(kinks.begin(), kinks.end(), [](const Kink& u, const Kink& v) { return u.x < v.x; });
  std::size_t merged = 0;
  for (std::size_t k = 0; k < kinks.size(); ++k) {
    if (merged > 0 && kinks[merged - 1].x == kinks[k].x) {
      kinks[merged - 1].jump += kinks[k].jump;
    } else {
      kinks[merged++] = kinks[k];
    }
  }
  kinks.resize(merged);

  const double tol = integral ? 0.0 : 1e-12;
  const std::size_t K = kinks.size();

  // Segment k spans (x_{k-1}, x_k) with x_{-1} = -inf and x_K = +inf.
  double s = left_slope;
  std::size_t k = 0;
  while (s < -tol && k < K) s += kinks[k++].jump;

  auto clamp = [&](double x) { return std::min(std::max(x, lo), hi); };

  if (s < -tol) {
    // strictly decreasing towards +inf
    return hi == kInf ? MinimizerSet::unbounded() : MinimizerSet::singleton(hi);
  }
  if (s > tol) {
    if (k == 0) {
      // strictly increasing everywhere
      return lo == -kInf ? MinimizerSet::unbounded() : MinimizerSet::singleton(lo);
    }
    return MinimizerSet::singleton(clamp(kinks[k - 1].x));
  }

  const double left = k == 0 ? -kInf : kinks[k - 1].x;
  std::size_t last = k;
  while (last < K && std::abs(s + kinks[last].jump) <= tol) s += kinks[last++].jump;
  const double right = last == K ? kInf : kinks[last].x;

  const double a = clamp(left);
  const double b = clamp(right);
  if (a == b) return MinimizerSet::singleton(a);
  if (a == -kInf && b == kInf) return {MinimizerKind::kAllReals, a, b};
  if (a == -kInf) return {MinimizerKind::kHalfInfiniteLeft, a, b};
  if (b == kInf) return {MinimizerKind::kHalfInfiniteRight, a, b};
  return {MinimizerKind::kInterval, a, b};
}

// A point in the relative interior of S: the singleton value, the midpoint of
// a bounded interval, or delta away from the finite end of a half line.
inline double ri_point(const MinimizerSet& S, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  switch (S.kind) {
    case MinimizerKind::kSingleton: return S.lo;
    case MinimizerKind::kInterval: return S.lo + 0.5 * (S.hi - S.lo);
    case MinimizerKind::kHalfInfiniteRight: return S.lo + delta;
    case MinimizerKind::kHalfInfiniteLeft: return S.hi - delta;
    case MinimizerKind::kAllReals: return 0.0;
    case MinimizerKind::kUnboundedBelow: break;
  }
  throw UnboundedError("restriction is unbounded below");
}

// Whether x lies in the relative interior of S. Singletons and intervals no
// wider than tol accept x within tol of the set; wider sets require x to lie
// strictly inside.
inline bool in_relative_interior(const MinimizerSet& S, double x, double tol) {
  switch (S.kind) {
    case MinimizerKind::kSingleton:
      return std::abs(x - S.lo) <= tol;
    case MinimizerKind::kInterval:
      if (S.hi - S.lo <= tol) return x >= S.lo - tol && x <= S.hi + tol;
      return x > S.lo && x < S.hi;
    case MinimizerKind::kHalfInfiniteLeft:
      return x < S.hi;
    case MinimizerKind::kHalfInfiniteRight:
      return x > S.lo;
    case MinimizerKind::kAllReals:
      return true;
    case MinimizerKind::kUnboundedBelow:
      return false;
  }
  return false;
}

}  // namespace cwm
