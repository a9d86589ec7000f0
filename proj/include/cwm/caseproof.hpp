#pragma once

// Exhaustive check that the dual assignment built from an interior local
// minimum satisfies the per-row dual equality constraints. Every ordering of
// the row's bounds, w and the two breakpoints is realized by small integer
// positions; all arithmetic is done on integers scaled by 2 so that the
// half-integral dual values and midpoints stay exact.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

namespace cwm::caseproof {

enum class Family {
  kPhi,     // s + z + y - A_i:'x = a_i
  kLambda,  // r + q - B_i:'x = b_i
};

// One row of the case analysis. Missing bounds are infinite; `w` is present
// only for the phi family; a breakpoint is meaningful only when its
// coefficient is non-zero (it is 0 otherwise).
struct RowCase {
  Family family = Family::kPhi;
  std::optional<int> lo;
  std::optional<int> hi;
  std::optional<int> w;
  std::array<int, 2> coeff{0, 0};
  std::array<int, 2> breakpoint{0, 0};
  int slope = 0;

  friend bool operator==(const RowCase&, const RowCase&) = default;
};

enum class CaseStatus { kHolds, kSkippedUnbounded, kViolated };

// All values are doubled.
struct CaseWitness {
  std::int64_t value = 0;  // chosen primal value
  std::array<std::int64_t, 2> x{0, 0};
  std::int64_t s = 0;      // phi family only
  std::int64_t lower = 0;  // y (phi) or q (lambda)
  std::int64_t upper = 0;  // z (phi) or r (lambda)
  std::int64_t residual = 0;
};

struct CaseVerdict {
  CaseStatus status = CaseStatus::kHolds;
  std::optional<CaseWitness> witness;  // absent only when skipped
};

inline constexpr int kPhiPositions = 5;
inline constexpr int kLambdaPositions = 4;
inline constexpr int kPhiSlopeMin = -3, kPhiSlopeMax = 4;
inline constexpr int kLambdaSlopeMin = -3, kLambdaSlopeMax = 3;

namespace detail {

template <class F>
void for_each_case(Family family, int positions, int slope_min, int slope_max, F&& visit) {
  std::vector<std::optional<int>> lows{std::nullopt};
  std::vector<std::optional<int>> highs;
  for (int k = 1; k <= positions; ++k) {
    lows.emplace_back(k);
    highs.emplace_back(k);
  }
  highs.emplace_back(std::nullopt);

  std::vector<std::optional<int>> ws;
  if (family == Family::kPhi) {
    for (int k = 1; k <= positions; ++k) ws.emplace_back(k);
  } else {
    ws.emplace_back(std::nullopt);
  }

  auto spots = [&](int coeff) {
    std::vector<int> out;
    if (coeff == 0) {
      out.push_back(0);
    } else {
      for (int k = 1; k <= positions; ++k) out.push_back(k);
    }
    return out;
  };

  RowCase c;
  c.family = family;
  for (const auto& lo : lows) {
    for (const auto& hi : highs) {
      if (lo && hi && !(*lo < *hi)) continue;
      for (const auto& w : ws) {
        for (int c1 = -1; c1 <= 1; ++c1) {
          for (int c2 = -1; c2 <= 1; ++c2) {
            for (int b1 : spots(c1)) {
              for (int b2 : spots(c2)) {
                for (int slope = slope_min; slope <= slope_max; ++slope) {
                  c.lo = lo;
                  c.hi = hi;
                  c.w = w;
                  c.coeff = {c1, c2};
                  c.breakpoint = {b1, b2};
                  c.slope = slope;
                  visit(c);
                }
              }
            }
          }
        }
      }
    }
  }
}

}  // namespace detail

template <class F>
void for_each_phi_case(F&& visit) {
  detail::for_each_case(Family::kPhi, kPhiPositions, kPhiSlopeMin, kPhiSlopeMax,
                        std::forward<F>(visit));
}

template <class F>
void for_each_lambda_case(F&& visit) {
  detail::for_each_case(Family::kLambda, kLambdaPositions, kLambdaSlopeMin, kLambdaSlopeMax,
                        std::forward<F>(visit));
}

inline std::vector<RowCase> enumerate_phi_cases() {
  std::vector<RowCase> out;
  for_each_phi_case([&](const RowCase& c) { out.push_back(c); });
  return out;
}

inline std::vector<RowCase> enumerate_lambda_cases() {
  std::vector<RowCase> out;
  for_each_lambda_case([&](const RowCase& c) { out.push_back(c); });
  return out;
}

// Finds the restricted minimizer region of the row, places the primal value
// in its relative interior (midpoint, or one unit past the finite end of a
// half line), derives the dual values and checks the row's equality.
inline CaseVerdict check_case(const RowCase& c) {
  using I = std::int64_t;
  struct Kink {
    I x;
    I jump;
  };
  std::vector<Kink> kinks;
  I left_slope = 2 * I{c.slope};
  if (c.w) {
    kinks.push_back({2 * I{*c.w}, 2});
    left_slope -= 2;
  }
  for (int k = 0; k < 2; ++k) {
    if (c.coeff[k] == 0) continue;
    kinks.push_back({2 * I{c.breakpoint[k]}, 2});
    if (c.coeff[k] < 0) left_slope -= 2;
  }
  std::sort(kinks.begin(), kinks.end(), [](const Kink& u, const Kink& v) { return u.x < v.x; });

  const std::optional<I> lo = c.lo ? std::optional<I>(2 * I{*c.lo}) : std::nullopt;
  const std::optional<I> hi = c.hi ? std::optional<I>(2 * I{*c.hi}) : std::nullopt;

  // Scan segment slopes; kinks at equal positions simply add up.
  I s = left_slope;
  std::size_t k = 0;
  while (s < 0 && k < kinks.size()) s += kinks[k++].jump;

  I value = 0;
  if (s < 0) {
    if (!hi) return {CaseStatus::kSkippedUnbounded, std::nullopt};
    value = *hi;
  } else if (s > 0 && k == 0) {
    if (!lo) return {CaseStatus::kSkippedUnbounded, std::nullopt};
    value = *lo;
  } else {
    std::optional<I> left, right;
    if (s > 0) {
      left = right = kinks[k - 1].x;
    } else {
      // zero slope on (x_{k-1}, x_k); coincident kinks give a zero-length segment
      if (k > 0) left = kinks[k - 1].x;
      if (k < kinks.size()) right = kinks[k].x;
    }
    // project onto [lo, hi]
    auto project = [&](std::optional<I> x, bool is_left) -> std::optional<I> {
      if (!x) {
        if (is_left) return lo;
        return hi;
      }
      I v = *x;
      if (lo) v = std::max(v, *lo);
      if (hi) v = std::min(v, *hi);
      return v;
    };
    const auto a = project(left, true);
    const auto b = project(right, false);
    if (a && b) {
      value = (*a + *b) / 2;
    } else if (a) {
      value = *a + 2;
    } else if (b) {
      value = *b - 2;
    } else {
      value = 0;
    }
  }

  CaseWitness wit;
  wit.value = value;
  I rhs = 2 * I{c.slope};  // doubled (slope + coeff'x)
  I coeff_dot_x = 0;
  for (int j = 0; j < 2; ++j) {
    const I bp = 2 * I{c.breakpoint[j]};
    if (c.coeff[j] == 0) {
      wit.x[j] = 1;
    } else if (value > bp) {
      wit.x[j] = 1 + c.coeff[j];
    } else if (value == bp) {
      wit.x[j] = 1;
    } else {
      wit.x[j] = 1 - c.coeff[j];
    }
    coeff_dot_x += c.coeff[j] * wit.x[j];
  }
  rhs += coeff_dot_x;

  if (c.w) {
    const I w2 = 2 * I{*c.w};
    if (w2 > value) {
      wit.s = 2;
    } else if (w2 < value) {
      wit.s = 0;
    } else {
      wit.s = std::clamp<I>(rhs, 0, 2);
    }
  }
  if (lo && value == *lo) wit.lower = std::max<I>(rhs - wit.s, 0);
  if (hi && value == *hi) wit.upper = std::min<I>(rhs - wit.s, 0);
  wit.residual = wit.s + wit.lower + wit.upper - coeff_dot_x - 2 * I{c.slope};

  const bool in_box = (!lo || value >= *lo) && (!hi || value <= *hi);
  const bool ranges = wit.s >= 0 && wit.s <= 2 && wit.lower >= 0 && wit.upper <= 0 &&
                      wit.x[0] >= 0 && wit.x[0] <= 2 && wit.x[1] >= 0 && wit.x[1] <= 2;
  const bool holds = in_box && ranges && wit.residual == 0;
  return {holds ? CaseStatus::kHolds : CaseStatus::kViolated, wit};
}

struct FamilyReport {
  std::size_t total = 0;
  std::size_t holds = 0;
  std::size_t skipped = 0;
  std::size_t violated = 0;
  std::optional<RowCase> first_violation;
  std::optional<CaseVerdict> first_violation_verdict;
};

struct ProofReport {
  FamilyReport phi;
  FamilyReport lambda;
  bool ok() const { return phi.violated == 0 && lambda.violated == 0; }
};

// Checks every case, splitting the list over `threads` workers. Counts and
// the first violation (lowest enumeration index) do not depend on the split.
inline FamilyReport check_cases(const std::vector<RowCase>& cases, unsigned threads = 1) {
  threads = std::max(1u, threads);
  struct Partial {
    std::size_t holds = 0, skipped = 0, violated = 0;
    std::optional<std::size_t> first;
    std::optional<CaseVerdict> verdict;
  };
  std::vector<Partial> parts(threads);
  auto work = [&](unsigned t) {
    const std::size_t begin = cases.size() * t / threads;
    const std::size_t end = cases.size() * (t + 1) / threads;
    Partial& part = parts[t];
    for (std::size_t i = begin; i < end; ++i) {
      const CaseVerdict v = check_case(cases[i]);
      switch (v.status) {
        case CaseStatus::kHolds: ++part.holds; break;
        case CaseStatus::kSkippedUnbounded: ++part.skipped; break;
        case CaseStatus::kViolated:
          ++part.violated;
          if (!part.first) {
            part.first = i;
            part.verdict = v;
          }
          break;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  FamilyReport report;
  report.total = cases.size();
  for (const Partial& part : parts) {
    report.holds += part.holds;
    report.skipped += part.skipped;
    report.violated += part.violated;
    if (part.first && !report.first_violation) {
      report.first_violation = cases[*part.first];
      report.first_violation_verdict = part.verdict;
    }
  }
  return report;
}

inline ProofReport run_case_proof(unsigned threads = 1) {
  return {check_cases(enumerate_phi_cases(), threads),
          check_cases(enumerate_lambda_cases(), threads)};
}

}  // namespace cwm::caseproof
