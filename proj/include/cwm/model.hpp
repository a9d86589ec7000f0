#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <tuple>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cwm/sparse.hpp"

namespace cwm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Mutable description of an instance of
//
//   min  sum_i max{w_i - phi_i, 0} + a'phi + b'lam + sum_j max{v_j + A_:j'phi + B_:j'lam, 0}
//   s.t. phi_lo <= phi <= phi_hi,  lam_lo <= lam <= lam_hi
//
// with A of size m x p and B of size n x p. Empty vectors are filled with
// defaults (0 for a, b, w, v; -inf / +inf for bounds) when the spec is built.
struct ProblemData {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<Triplet> A;
  std::vector<Triplet> B;
  std::vector<double> a, b, w, v;
  std::vector<double> phi_lo, phi_hi, lam_lo, lam_hi;
};

// Immutable problem instance with dual sparse adjacency for A and B.
class ProblemSpec {
 public:
  ProblemSpec() = default;

  explicit ProblemSpec(ProblemData data)
      : m_(data.m), n_(data.n), p_(data.p),
        A_(data.m, data.p, std::move(data.A)),
        B_(data.n, data.p, std::move(data.B)),
        a_(sized(std::move(data.a), m_, 0.0, "a")),
        b_(sized(std::move(data.b), n_, 0.0, "b")),
        w_(sized(std::move(data.w), m_, 0.0, "w")),
        v_(sized(std::move(data.v), p_, 0.0, "v")),
        phi_lo_(sized(std::move(data.phi_lo), m_, -kInf, "phi_lo")),
        phi_hi_(sized(std::move(data.phi_hi), m_, kInf, "phi_hi")),
        lam_lo_(sized(std::move(data.lam_lo), n_, -kInf, "lam_lo")),
        lam_hi_(sized(std::move(data.lam_hi), n_, kInf, "lam_hi")) {}

  std::size_t m() const noexcept { return m_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return p_; }
  const SparseMatrix& A() const noexcept { return A_; }
  const SparseMatrix& B() const noexcept { return B_; }
  const std::vector<double>& a() const noexcept { return a_; }
  const std::vector<double>& b() const noexcept { return b_; }
  const std::vector<double>& w() const noexcept { return w_; }
  const std::vector<double>& v() const noexcept { return v_; }
  const std::vector<double>& phi_lo() const noexcept { return phi_lo_; }
  const std::vector<double>& phi_hi() const noexcept { return phi_hi_; }
  const std::vector<double>& lam_lo() const noexcept { return lam_lo_; }
  const std::vector<double>& lam_hi() const noexcept { return lam_hi_; }

  ProblemData data() const {
    return {m_, n_, p_, A_.triplets(), B_.triplets(), a_, b_, w_, v_,
            phi_lo_, phi_hi_, lam_lo_, lam_hi_};
  }

 private:
  static std::vector<double> sized(std::vector<double> values, std::size_t len, double fill,
                                   const char* name) {
    if (values.empty()) return std::vector<double>(len, fill);
    if (values.size() != len) {
      throw std::invalid_argument(std::string("vector '") + name + "' has length " +
                                  std::to_string(values.size()) + ", expected " +
                                  std::to_string(len));
    }
    return values;
  }

  std::size_t m_ = 0, n_ = 0, p_ = 0;
  SparseMatrix A_, B_;
  std::vector<double> a_, b_, w_, v_;
  std::vector<double> phi_lo_, phi_hi_, lam_lo_, lam_hi_;
};

// ---------------------------------------------------------------------------
// Structural validation

enum class ViolationKind {
  kBoundsNotOrdered,
  kIndexOutOfRange,
  kDuplicateEntry,
  kNotANumber,
  kInfiniteValue,
  kAdjacencyMismatch,
};

inline const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kBoundsNotOrdered: return "bounds not strictly ordered";
    case ViolationKind::kIndexOutOfRange: return "sparse index out of range";
    case ViolationKind::kDuplicateEntry: return "duplicate sparse entry";
    case ViolationKind::kNotANumber: return "value is NaN";
    case ViolationKind::kInfiniteValue: return "value must be finite";
    case ViolationKind::kAdjacencyMismatch: return "row and column views differ";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  std::string location;  // e.g. "A(0,3)", "phi_lo[2]"
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const noexcept { return violations.empty(); }
};

namespace detail {

inline std::string loc(const char* name, std::size_t i) {
  return std::string(name) + "[" + std::to_string(i) + "]";
}

inline std::string loc(const char* name, std::size_t i, std::size_t j) {
  return std::string(name) + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

inline std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

inline void validate_matrix(const SparseMatrix& M, const char* name, ValidationReport& report) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Triplet& t : M.triplets()) {
    const std::string where = loc(name, t.row, t.col);
    if (t.row >= M.rows() || t.col >= M.cols()) {
      report.violations.push_back({ViolationKind::kIndexOutOfRange, where,
                                   "matrix is " + std::to_string(M.rows()) + "x" +
                                       std::to_string(M.cols())});
      continue;
    }
    if (std::isnan(t.value)) {
      report.violations.push_back({ViolationKind::kNotANumber, where, ""});
    } else if (std::isinf(t.value)) {
      report.violations.push_back({ViolationKind::kInfiniteValue, where, num(t.value)});
    }
    if (!seen.emplace(t.row, t.col).second) {
      report.violations.push_back({ViolationKind::kDuplicateEntry, where, ""});
    }
  }

  std::multiset<std::tuple<std::size_t, std::size_t, double>> by_row, by_col;
  for (std::size_t i = 0; i < M.rows(); ++i) {
    for (const SparseEntry& e : M.row(i)) by_row.emplace(i, e.index, e.value);
  }
  for (std::size_t j = 0; j < M.cols(); ++j) {
    for (const SparseEntry& e : M.col(j)) by_col.emplace(e.index, j, e.value);
  }
  if (by_row != by_col) {
    report.violations.push_back({ViolationKind::kAdjacencyMismatch, name, ""});
  }
}

inline void validate_vector(const std::vector<double>& x, const char* name,
                            ValidationReport& report) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i])) {
      report.violations.push_back({ViolationKind::kNotANumber, loc(name, i), ""});
    } else if (std::isinf(x[i])) {
      report.violations.push_back({ViolationKind::kInfiniteValue, loc(name, i), num(x[i])});
    }
  }
}

inline void validate_bounds(const std::vector<double>& lo, const std::vector<double>& hi,
                            const char* lo_name, const char* hi_name,
                            ValidationReport& report) {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (std::isnan(lo[i])) {
      report.violations.push_back({ViolationKind::kNotANumber, loc(lo_name, i), ""});
    }
    if (std::isnan(hi[i])) {
      report.violations.push_back({ViolationKind::kNotANumber, loc(hi_name, i), ""});
    }
    if (lo[i] == kInf) {
      report.violations.push_back({ViolationKind::kInfiniteValue, loc(lo_name, i), "+inf"});
    }
    if (hi[i] == -kInf) {
      report.violations.push_back({ViolationKind::kInfiniteValue, loc(hi_name, i), "-inf"});
    }
    if (!(lo[i] < hi[i])) {
      report.violations.push_back({ViolationKind::kBoundsNotOrdered, loc(lo_name, i),
                                   num(lo[i]) + " >= " + num(hi[i])});
    }
  }
}

}  // namespace detail

// Reports every invariant violation of the spec. Never throws.
inline ValidationReport validate_spec(const ProblemSpec& spec) {
  ValidationReport report;
  detail::validate_matrix(spec.A(), "A", report);
  detail::validate_matrix(spec.B(), "B", report);
  detail::validate_vector(spec.a(), "a", report);
  detail::validate_vector(spec.b(), "b", report);
  detail::validate_vector(spec.w(), "w", report);
  detail::validate_vector(spec.v(), "v", report);
  detail::validate_bounds(spec.phi_lo(), spec.phi_hi(), "phi_lo", "phi_hi", report);
  detail::validate_bounds(spec.lam_lo(), spec.lam_hi(), "lam_lo", "lam_hi", report);
  return report;
}

// ---------------------------------------------------------------------------
// Optimality guarantee conditions

enum class GuaranteeCondition {
  kEntryValue = 1,   // entries of A, B in {-1, 0, 1}
  kRowNonzeros = 2,  // at most two non-zeros per row of A and of B
  kLinearA = 3,      // a_i in (-inf,-2] u {-1,0,1,2} u [3,inf)
  kLinearB = 4,      // b_i in (-inf,-2] u {-1,0,1} u [2,inf)
};

struct GuaranteeViolation {
  GuaranteeCondition condition;
  std::string location;
  double value;
};

struct GuaranteeReport {
  std::vector<GuaranteeViolation> violations;
  bool satisfied() const noexcept { return violations.empty(); }
};

inline bool admissible_a(double x) {
  return x <= -2.0 || x >= 3.0 || x == -1.0 || x == 0.0 || x == 1.0 || x == 2.0;
}

inline bool admissible_b(double x) {
  return x <= -2.0 || x >= 2.0 || x == -1.0 || x == 0.0 || x == 1.0;
}

// Checks the sufficient conditions under which every interior local minimum
// is a global minimum. Assumes a valid spec.
inline GuaranteeReport check_guarantee(const ProblemSpec& spec) {
  GuaranteeReport report;
  auto scan = [&](const SparseMatrix& M, const char* name) {
    for (std::size_t i = 0; i < M.rows(); ++i) {
      const auto row = M.row(i);
      for (const SparseEntry& e : row) {
        if (e.value != 1.0 && e.value != -1.0) {
          report.violations.push_back(
              {GuaranteeCondition::kEntryValue, detail::loc(name, i, e.index), e.value});
        }
      }
      if (row.size() > 2) {
        report.violations.push_back({GuaranteeCondition::kRowNonzeros,
                                     std::string(name) + " row " + std::to_string(i),
                                     static_cast<double>(row.size())});
      }
    }
  };
  scan(spec.A(), "A");
  scan(spec.B(), "B");
  for (std::size_t i = 0; i < spec.m(); ++i) {
    if (!admissible_a(spec.a()[i])) {
      report.violations.push_back(
          {GuaranteeCondition::kLinearA, detail::loc("a", i), spec.a()[i]});
    }
  }
  for (std::size_t i = 0; i < spec.n(); ++i) {
    if (!admissible_b(spec.b()[i])) {
      report.violations.push_back(
          {GuaranteeCondition::kLinearB, detail::loc("b", i), spec.b()[i]});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Objective evaluation

namespace detail {

// Left-to-right sum, Neumaier-compensated when requested.
class Accumulator {
 public:
  explicit Accumulator(bool compensated) : compensated_(compensated) {}

  void add(double x) {
    if (!compensated_) {
      sum_ += x;
      return;
    }
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + carry_; }

 private:
  bool compensated_;
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline constexpr std::size_t kCompensationThreshold = 10000;

}  // namespace detail

// Tolerance used when testing whether a value lies inside a box bound.
inline double box_tolerance(double bound) { return 1e-9 * (1.0 + std::abs(bound)); }

inline bool within_box(double x, double lo, double hi) {
  if (std::isnan(x)) return false;
  if (std::isfinite(lo) && x < lo - box_tolerance(lo)) return false;
  if (std::isfinite(hi) && x > hi + box_tolerance(hi)) return false;
  return std::isfinite(x);
}

inline void check_dimensions(const ProblemSpec& spec, std::span<const double> phi,
                             std::span<const double> lam) {
  if (phi.size() != spec.m() || lam.size() != spec.n()) {
    throw std::invalid_argument("point has dimensions (" + std::to_string(phi.size()) + ", " +
                                std::to_string(lam.size()) + "), expected (" +
                                std::to_string(spec.m()) + ", " + std::to_string(spec.n()) +
                                ")");
  }
}

// Activity of every max-term column: t_j = v_j + A_:j'phi + B_:j'lam.
inline std::vector<double> column_activity(const ProblemSpec& spec, std::span<const double> phi,
                                           std::span<const double> lam) {
  check_dimensions(spec, phi, lam);
  std::vector<double> t(spec.p());
  const bool compensated = spec.p() > detail::kCompensationThreshold;
  for (std::size_t j = 0; j < spec.p(); ++j) {
    detail::Accumulator acc(compensated);
    acc.add(spec.v()[j]);
    for (const SparseEntry& e : spec.A().col(j)) acc.add(e.value * phi[e.index]);
    for (const SparseEntry& e : spec.B().col(j)) acc.add(e.value * lam[e.index]);
    t[j] = acc.value();
  }
  return t;
}

// Objective value given a precomputed activity vector. No bound checks.
inline double objective_from_activity(const ProblemSpec& spec, std::span<const double> phi,
                                      std::span<const double> lam,
                                      std::span<const double> activity) {
  detail::Accumulator acc(spec.p() > detail::kCompensationThreshold);
  for (std::size_t i = 0; i < spec.m(); ++i) acc.add(std::max(spec.w()[i] - phi[i], 0.0));
  for (std::size_t i = 0; i < spec.m(); ++i) acc.add(spec.a()[i] * phi[i]);
  for (std::size_t i = 0; i < spec.n(); ++i) acc.add(spec.b()[i] * lam[i]);
  for (std::size_t j = 0; j < spec.p(); ++j) acc.add(std::max(activity[j], 0.0));
  return acc.value();
}

// Objective value at (phi, lam). Throws std::invalid_argument on dimension
// mismatch and std::domain_error if the point lies outside the box.
inline double objective(const ProblemSpec& spec, std::span<const double> phi,
                        std::span<const double> lam) {
  check_dimensions(spec, phi, lam);
  for (std::size_t i = 0; i < spec.m(); ++i) {
    if (!within_box(phi[i], spec.phi_lo()[i], spec.phi_hi()[i])) {
      throw std::domain_error("phi[" + std::to_string(i) + "] = " + detail::num(phi[i]) +
                              " is outside its bounds");
    }
  }
  for (std::size_t i = 0; i < spec.n(); ++i) {
    if (!within_box(lam[i], spec.lam_lo()[i], spec.lam_hi()[i])) {
      throw std::domain_error("lam[" + std::to_string(i) + "] = " + detail::num(lam[i]) +
                              " is outside its bounds");
    }
  }
  const auto t = column_activity(spec, phi, lam);
  return objective_from_activity(spec, phi, lam, t);
}

}  // namespace cwm
