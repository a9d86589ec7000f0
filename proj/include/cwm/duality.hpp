#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cwm/model.hpp"
#include "cwm/solver.hpp"

namespace cwm {

// Dual assignment for the linearized primal (explicit alpha, beta) together
// with the primal values of alpha and beta at the point it was built from.
struct DualCertificate {
  std::vector<double> x;  // p, in [0, 1]
  std::vector<double> s;  // m, in [0, 1]
  std::vector<double> y;  // m, >= 0
  std::vector<double> z;  // m, <= 0
  std::vector<double> q;  // n, >= 0
  std::vector<double> r;  // n, <= 0
  std::vector<double> alpha;  // m
  std::vector<double> beta;   // p
  // False when the point was not an interior local minimum within tol_eq.
  bool precondition_met = true;
};

inline constexpr double kDefaultTolEq = 1e-6;

namespace detail {

inline double clip(double x, double lo, double hi) { return std::min(hi, std::max(x, lo)); }
inline double nonneg(double x) { return std::max(x, 0.0); }
inline double nonpos(double x) { return std::min(x, 0.0); }

inline bool at_bound(double x, double bound, double tol) {
  return std::isfinite(bound) && std::abs(x - bound) <= tol;
}

}  // namespace detail

// Builds the dual assignment from a primal point by classifying each column
// activity, each w-hinge and each bound as active or not (|gap| <= tol_eq
// counts as active). Infinite bounds force their partner variable to zero.
inline DualCertificate build_certificate(const ProblemSpec& spec, std::span<const double> phi,
                                         std::span<const double> lam,
                                         double tol_eq = kDefaultTolEq) {
  const auto t = column_activity(spec, phi, lam);
  DualCertificate cert;
  cert.x.resize(spec.p());
  cert.beta.resize(spec.p());
  for (std::size_t j = 0; j < spec.p(); ++j) {
    cert.x[j] = t[j] > tol_eq ? 1.0 : (t[j] < -tol_eq ? 0.0 : 0.5);
    cert.beta[j] = std::max(t[j], 0.0);
  }

  auto row_dot_x = [&](const SparseMatrix& M, std::size_t i) {
    double acc = 0.0;
    for (const SparseEntry& e : M.row(i)) acc += e.value * cert.x[e.index];
    return acc;
  };

  cert.s.assign(spec.m(), 0.0);
  cert.y.assign(spec.m(), 0.0);
  cert.z.assign(spec.m(), 0.0);
  cert.alpha.resize(spec.m());
  for (std::size_t i = 0; i < spec.m(); ++i) {
    const double w = spec.w()[i];
    const double rhs = spec.a()[i] + row_dot_x(spec.A(), i);
    if (w > phi[i] + tol_eq) {
      cert.s[i] = 1.0;
    } else if (w < phi[i] - tol_eq) {
      cert.s[i] = 0.0;
    } else {
      cert.s[i] = detail::clip(rhs, 0.0, 1.0);
    }
    if (detail::at_bound(phi[i], spec.phi_hi()[i], tol_eq)) {
      cert.z[i] = detail::nonpos(rhs - cert.s[i]);
    }
    if (detail::at_bound(phi[i], spec.phi_lo()[i], tol_eq)) {
      cert.y[i] = detail::nonneg(rhs - cert.s[i]);
    }
    cert.alpha[i] = std::max(w - phi[i], 0.0);
  }

  cert.q.assign(spec.n(), 0.0);
  cert.r.assign(spec.n(), 0.0);
  for (std::size_t i = 0; i < spec.n(); ++i) {
    const double rhs = spec.b()[i] + row_dot_x(spec.B(), i);
    if (detail::at_bound(lam[i], spec.lam_hi()[i], tol_eq)) cert.r[i] = detail::nonpos(rhs);
    if (detail::at_bound(lam[i], spec.lam_lo()[i], tol_eq)) cert.q[i] = detail::nonneg(rhs);
  }

  cert.precondition_met = is_interior_local_min(spec, phi, lam, tol_eq).interior;
  return cert;
}

namespace detail {

inline void check_certificate_dimensions(const ProblemSpec& spec, const DualCertificate& c) {
  const bool ok = c.x.size() == spec.p() && c.beta.size() == spec.p() &&
                  c.s.size() == spec.m() && c.y.size() == spec.m() &&
                  c.z.size() == spec.m() && c.alpha.size() == spec.m() &&
                  c.q.size() == spec.n() && c.r.size() == spec.n();
  if (!ok) throw std::invalid_argument("certificate dimensions do not match the spec");
}

// bound * var where an infinite bound paired with a zero variable counts as 0.
inline double bound_product(double bound, double var, const char* name, std::size_t i) {
  if (std::isinf(bound)) {
    if (var != 0.0) {
      throw std::domain_error(std::string(name) + "[" + std::to_string(i) +
                              "] is non-zero but its bound is infinite");
    }
    return 0.0;
  }
  return bound * var;
}

}  // namespace detail

// f = phi_hi'z + phi_lo'y + w's + lam_hi'r + lam_lo'q + v'x.
// Throws std::domain_error when a variable paired with an infinite bound is non-zero.
inline double dual_objective(const ProblemSpec& spec, const DualCertificate& cert) {
  detail::check_certificate_dimensions(spec, cert);
  detail::Accumulator acc(spec.p() > detail::kCompensationThreshold);
  for (std::size_t i = 0; i < spec.m(); ++i) {
    acc.add(detail::bound_product(spec.phi_hi()[i], cert.z[i], "z", i));
    acc.add(detail::bound_product(spec.phi_lo()[i], cert.y[i], "y", i));
    acc.add(spec.w()[i] * cert.s[i]);
  }
  for (std::size_t i = 0; i < spec.n(); ++i) {
    acc.add(detail::bound_product(spec.lam_hi()[i], cert.r[i], "r", i));
    acc.add(detail::bound_product(spec.lam_lo()[i], cert.q[i], "q", i));
  }
  for (std::size_t j = 0; j < spec.p(); ++j) acc.add(spec.v()[j] * cert.x[j]);
  return acc.value();
}

struct RangeViolation {
  std::string variable;  // e.g. "x[3]"
  double value;
};

struct SlacknessViolation {
  std::string constraint;  // e.g. "x[3]*(beta-t)"
  double product;
};

struct CertificateReport {
  double max_eq_residual_phi = 0.0;     // s + z + y - A_i:'x = a_i
  double max_eq_residual_lambda = 0.0;  // r + q - B_i:'x = b_i
  std::vector<RangeViolation> range_violations;
  std::vector<SlacknessViolation> cs_violations;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  bool verdict = false;
};

// Checks dual feasibility, complementary slackness against (phi, lam, alpha,
// beta) and the duality gap, all at absolute tolerance `tol` (the gap is
// compared against tol * (1 + |primal|)). Never throws on bad certificates.
inline CertificateReport verify(const ProblemSpec& spec, std::span<const double> phi,
                                std::span<const double> lam, const DualCertificate& cert,
                                double tol) {
  check_dimensions(spec, phi, lam);
  detail::check_certificate_dimensions(spec, cert);
  CertificateReport report;
  const auto t = column_activity(spec, phi, lam);

  auto range = [&](const char* name, std::size_t i, double value, double lo, double hi) {
    if (!(value >= lo - tol && value <= hi + tol)) {
      report.range_violations.push_back({std::string(name) + "[" + std::to_string(i) + "]", value});
    }
  };
  auto slack = [&](const std::string& what, std::size_t i, double product) {
    if (!(std::abs(product) <= tol)) {
      report.cs_violations.push_back({what + "@" + std::to_string(i), product});
    }
  };
  // Infinite bounds contribute no slackness product; a non-zero partner is a range error.
  auto bound_slack = [&](const char* what, const char* var, std::size_t i, double mult,
                         double x, double bound) {
    if (std::isinf(bound)) {
      if (mult != 0.0) {
        report.range_violations.push_back(
            {std::string(var) + "[" + std::to_string(i) + "] (infinite bound)", mult});
      }
      return;
    }
    slack(what, i, mult * (x - bound));
  };

  for (std::size_t j = 0; j < spec.p(); ++j) {
    range("x", j, cert.x[j], 0.0, 1.0);
    range("beta", j, cert.beta[j], 0.0, kInf);
    slack("x*(beta-t)", j, cert.x[j] * (cert.beta[j] - t[j]));
    slack("(1-x)*beta", j, (1.0 - cert.x[j]) * cert.beta[j]);
    if (cert.beta[j] < t[j] - tol) {
      report.range_violations.push_back({"beta[" + std::to_string(j) + "] < t", cert.beta[j]});
    }
  }

  for (std::size_t i = 0; i < spec.m(); ++i) {
    range("s", i, cert.s[i], 0.0, 1.0);
    range("y", i, cert.y[i], 0.0, kInf);
    range("z", i, cert.z[i], -kInf, 0.0);
    range("alpha", i, cert.alpha[i], 0.0, kInf);
    if (cert.alpha[i] + phi[i] < spec.w()[i] - tol) {
      report.range_violations.push_back({"alpha[" + std::to_string(i) + "] + phi < w",
                                         cert.alpha[i]});
    }
    double residual = cert.s[i] + cert.z[i] + cert.y[i] - spec.a()[i];
    for (const SparseEntry& e : spec.A().row(i)) residual -= e.value * cert.x[e.index];
    report.max_eq_residual_phi = std::max(report.max_eq_residual_phi, std::abs(residual));
    slack("s*(alpha+phi-w)", i, cert.s[i] * (cert.alpha[i] + phi[i] - spec.w()[i]));
    slack("(1-s)*alpha", i, (1.0 - cert.s[i]) * cert.alpha[i]);
    bound_slack("y*(phi-phi_lo)", "y", i, cert.y[i], phi[i], spec.phi_lo()[i]);
    bound_slack("z*(phi-phi_hi)", "z", i, cert.z[i], phi[i], spec.phi_hi()[i]);
  }

  for (std::size_t i = 0; i < spec.n(); ++i) {
    range("q", i, cert.q[i], 0.0, kInf);
    range("r", i, cert.r[i], -kInf, 0.0);
    double residual = cert.r[i] + cert.q[i] - spec.b()[i];
    for (const SparseEntry& e : spec.B().row(i)) residual -= e.value * cert.x[e.index];
    report.max_eq_residual_lambda = std::max(report.max_eq_residual_lambda, std::abs(residual));
    bound_slack("q*(lam-lam_lo)", "q", i, cert.q[i], lam[i], spec.lam_lo()[i]);
    bound_slack("r*(lam-lam_hi)", "r", i, cert.r[i], lam[i], spec.lam_hi()[i]);
  }

  report.primal = objective_from_activity(spec, phi, lam, t);
  const bool finite_pairs = report.range_violations.empty();
  if (finite_pairs) {
    report.dual = dual_objective(spec, cert);
  } else {
    // dual objective over the terms that are defined
    DualCertificate trimmed = cert;
    for (std::size_t i = 0; i < spec.m(); ++i) {
      if (std::isinf(spec.phi_hi()[i])) trimmed.z[i] = 0.0;
      if (std::isinf(spec.phi_lo()[i])) trimmed.y[i] = 0.0;
    }
    for (std::size_t i = 0; i < spec.n(); ++i) {
      if (std::isinf(spec.lam_hi()[i])) trimmed.r[i] = 0.0;
      if (std::isinf(spec.lam_lo()[i])) trimmed.q[i] = 0.0;
    }
    report.dual = dual_objective(spec, trimmed);
  }
  report.gap = report.primal - report.dual;

  report.verdict = report.max_eq_residual_phi <= tol && report.max_eq_residual_lambda <= tol &&
                   report.range_violations.empty() && report.cs_violations.empty() &&
                   std::abs(report.gap) <= tol * (1.0 + std::abs(report.primal));
  return report;
}

}  // namespace cwm
