#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cwm/model.hpp"
#include "cwm/univariate.hpp"

namespace cwm {

struct SolverConfig {
  double eps = 1e-7;               // minimum objective improvement per sweep
  double delta = 1.0;              // offset used on half-infinite minimizer sets
  std::size_t max_sweeps = 1000000;
  std::size_t recompute_period = 100;
  // A sweep below eps only ends the run when the point also passes the
  // interior check at tolerance 10 * eps; plateau moves that leave the
  // objective unchanged otherwise stop the run too early.
  bool require_interior = true;

  void check() const {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be at least 1");
    if (recompute_period < 1) throw std::invalid_argument("recompute_period must be at least 1");
  }
};

struct Point {
  std::vector<double> phi;
  std::vector<double> lam;
};

enum class Termination { kConverged, kMaxSweeps, kUnbounded };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged";
    case Termination::kMaxSweeps: return "max_sweeps";
    case Termination::kUnbounded: return "unbounded";
  }
  return "unknown";
}

struct SolveResult {
  std::vector<double> phi;
  std::vector<double> lam;
  double objective_value = 0.0;
  std::size_t sweeps = 0;
  Termination termination = Termination::kConverged;
  // objective_trace[0] is the starting objective, entry k the value after sweep k.
  std::vector<double> objective_trace;
  // Number of periodic recomputations whose drift exceeded 1e-8 * (1 + |t_j|).
  std::size_t drift_warnings = 0;
  double max_activity_drift = 0.0;
};

using ProgressCallback = std::function<void(std::size_t sweep, double objective)>;

namespace detail {

inline double project_zero(double lo, double hi) {
  if (lo > 0.0) return lo;
  if (hi < 0.0) return hi;
  return 0.0;
}

// Replaces `activity` by a fresh computation; returns the largest relative drift.
inline double refresh_activity(const ProblemSpec& spec, const std::vector<double>& phi,
                               const std::vector<double>& lam, std::vector<double>& activity) {
  const auto fresh = column_activity(spec, phi, lam);
  double worst = 0.0;
  for (std::size_t j = 0; j < fresh.size(); ++j) {
    worst = std::max(worst, std::abs(activity[j] - fresh[j]) / (1.0 + std::abs(fresh[j])));
  }
  activity = fresh;
  return worst;
}

}  // namespace detail

struct CoordinateStatus {
  bool is_lambda = false;
  std::size_t index = 0;
  double value = 0.0;
  MinimizerSet minimizers;
  bool interior = false;
};

struct InteriorReport {
  bool interior = true;
  std::vector<CoordinateStatus> coordinates;
};

// Checks whether every coordinate of (phi, lam) lies in the relative interior
// of its restricted minimizer set (within tol for singletons).
inline InteriorReport is_interior_local_min(const ProblemSpec& spec,
                                            std::span<const double> phi,
                                            std::span<const double> lam, double tol) {
  const auto activity = column_activity(spec, phi, lam);
  InteriorReport report;
  report.coordinates.reserve(spec.m() + spec.n());
  for (std::size_t i = 0; i < spec.m(); ++i) {
    const auto S = minimize_on_box(build_restriction_phi(spec, phi, activity, i),
                                   spec.phi_lo()[i], spec.phi_hi()[i]);
    const bool ok = in_relative_interior(S, phi[i], tol);
    report.coordinates.push_back({false, i, phi[i], S, ok});
    report.interior = report.interior && ok;
  }
  for (std::size_t i = 0; i < spec.n(); ++i) {
    const auto S = minimize_on_box(build_restriction_lambda(spec, lam, activity, i),
                                   spec.lam_lo()[i], spec.lam_hi()[i]);
    const bool ok = in_relative_interior(S, lam[i], tol);
    report.coordinates.push_back({true, i, lam[i], S, ok});
    report.interior = report.interior && ok;
  }
  return report;
}

// Cyclic coordinate-wise minimization with the relative-interior rule.
// Each sweep updates phi_0..phi_{m-1} then lam_0..lam_{n-1}; the column
// activities are maintained incrementally and recomputed every
// `recompute_period` sweeps and at termination.
inline SolveResult solve(const ProblemSpec& spec, const SolverConfig& config = {},
                         const std::optional<Point>& start = std::nullopt,
                         const ProgressCallback& progress = {}) {
  config.check();
  SolveResult result;
  if (start) {
    check_dimensions(spec, start->phi, start->lam);
    for (std::size_t i = 0; i < spec.m(); ++i) {
      if (!within_box(start->phi[i], spec.phi_lo()[i], spec.phi_hi()[i])) {
        throw std::invalid_argument("start phi[" + std::to_string(i) + "] is outside its bounds");
      }
    }
    for (std::size_t i = 0; i < spec.n(); ++i) {
      if (!within_box(start->lam[i], spec.lam_lo()[i], spec.lam_hi()[i])) {
        throw std::invalid_argument("start lam[" + std::to_string(i) + "] is outside its bounds");
      }
    }
    result.phi = start->phi;
    result.lam = start->lam;
  } else {
    result.phi.resize(spec.m());
    result.lam.resize(spec.n());
    for (std::size_t i = 0; i < spec.m(); ++i) {
      result.phi[i] = detail::project_zero(spec.phi_lo()[i], spec.phi_hi()[i]);
    }
    for (std::size_t i = 0; i < spec.n(); ++i) {
      result.lam[i] = detail::project_zero(spec.lam_lo()[i], spec.lam_hi()[i]);
    }
  }

  auto& phi = result.phi;
  auto& lam = result.lam;
  std::vector<double> activity = column_activity(spec, phi, lam);
  double current = objective_from_activity(spec, phi, lam, activity);
  result.objective_trace.push_back(current);
  std::size_t period = config.recompute_period;

  // Returns false when the restriction is unbounded below.
  auto update = [&](const PiecewiseAffine& f, double lo, double hi, double& x,
                    const SparseMatrix& M, std::size_t i) {
    const MinimizerSet S = minimize_on_box(f, lo, hi);
    if (S.kind == MinimizerKind::kUnboundedBelow) return false;
    const double next = ri_point(S, config.delta);
    assert(f(next) <= f(x) + 1e-12 * (1.0 + std::abs(f(x))));
    const double step = next - x;
    if (step != 0.0) {
      for (const SparseEntry& e : M.row(i)) activity[e.index] += e.value * step;
      x = next;
    }
    return true;
  };

  result.termination = Termination::kMaxSweeps;
  while (result.sweeps < config.max_sweeps) {
    bool bounded = true;
    for (std::size_t i = 0; i < spec.m() && bounded; ++i) {
      bounded = update(build_restriction_phi(spec, phi, activity, i), spec.phi_lo()[i],
                       spec.phi_hi()[i], phi[i], spec.A(), i);
    }
    for (std::size_t i = 0; i < spec.n() && bounded; ++i) {
      bounded = update(build_restriction_lambda(spec, lam, activity, i), spec.lam_lo()[i],
                       spec.lam_hi()[i], lam[i], spec.B(), i);
    }
    ++result.sweeps;
    if (!bounded) {
      result.termination = Termination::kUnbounded;
      break;
    }

    if (result.sweeps % period == 0) {
      const double drift = detail::refresh_activity(spec, phi, lam, activity);
      result.max_activity_drift = std::max(result.max_activity_drift, drift);
      if (drift > 1e-8) {
        ++result.drift_warnings;
        period = 1;
      }
    }

    const double next = objective_from_activity(spec, phi, lam, activity);
    result.objective_trace.push_back(next);
    if (progress) progress(result.sweeps, next);
    bool converged = current - next < config.eps;
    current = next;
    if (converged && config.require_interior) {
      detail::refresh_activity(spec, phi, lam, activity);
      converged = is_interior_local_min(spec, phi, lam, 10.0 * config.eps).interior;
    }
    if (converged) {
      result.termination = Termination::kConverged;
      break;
    }
  }

  const double drift = detail::refresh_activity(spec, phi, lam, activity);
  result.max_activity_drift = std::max(result.max_activity_drift, drift);
  if (drift > 1e-8) ++result.drift_warnings;
  result.objective_value = objective_from_activity(spec, phi, lam, activity);
  return result;
}

}  // namespace cwm
