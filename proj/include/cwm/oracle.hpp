#pragma once

// Reference implementations used to validate the coordinate-wise solver on
// small instances. Nothing here shares code with the solver path.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cwm/instances.hpp"
#include "cwm/model.hpp"
#include "cwm/univariate.hpp"

namespace cwm::oracle {

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// min c'x  s.t.  G x >= h,  lo <= x <= hi  (missing bounds are infinite).
struct DenseLP {
  std::vector<mpq_class> cost;
  std::vector<std::vector<mpq_class>> rows;
  std::vector<mpq_class> rhs;
  std::vector<std::optional<mpq_class>> lo;
  std::vector<std::optional<mpq_class>> hi;
};

namespace detail {

inline std::optional<mpq_class> finite(double x) {
  if (std::isinf(x)) return std::nullopt;
  return mpq_class(x);
}

}  // namespace detail

// Linearization of the spec with explicit alpha and beta. Variable order:
// phi (m), lam (n), alpha (m), beta (p).
inline DenseLP to_dense_lp(const ProblemSpec& spec) {
  const std::size_t m = spec.m(), n = spec.n(), p = spec.p();
  const std::size_t vars = 2 * m + n + p;
  DenseLP lp;
  lp.cost.assign(vars, 0);
  lp.lo.assign(vars, std::nullopt);
  lp.hi.assign(vars, std::nullopt);
  for (std::size_t i = 0; i < m; ++i) {
    lp.cost[i] = mpq_class(spec.a()[i]);
    lp.lo[i] = detail::finite(spec.phi_lo()[i]);
    lp.hi[i] = detail::finite(spec.phi_hi()[i]);
    lp.cost[m + n + i] = 1;
    lp.lo[m + n + i] = mpq_class(0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    lp.cost[m + i] = mpq_class(spec.b()[i]);
    lp.lo[m + i] = detail::finite(spec.lam_lo()[i]);
    lp.hi[m + i] = detail::finite(spec.lam_hi()[i]);
  }
  for (std::size_t j = 0; j < p; ++j) {
    lp.cost[2 * m + n + j] = 1;
    lp.lo[2 * m + n + j] = mpq_class(0);
  }
  // beta_j - A_:j'phi - B_:j'lam >= v_j
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<mpq_class> row(vars, 0);
    row[2 * m + n + j] = 1;
    for (const SparseEntry& e : spec.A().col(j)) row[e.index] -= mpq_class(e.value);
    for (const SparseEntry& e : spec.B().col(j)) row[m + e.index] -= mpq_class(e.value);
    lp.rows.push_back(std::move(row));
    lp.rhs.emplace_back(spec.v()[j]);
  }
  // alpha_i + phi_i >= w_i
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<mpq_class> row(vars, 0);
    row[i] = 1;
    row[m + n + i] = 1;
    lp.rows.push_back(std::move(row));
    lp.rhs.emplace_back(spec.w()[i]);
  }
  return lp;
}

namespace detail {

// Two-phase tableau simplex over exact rationals with Bland's rule.
// Solves min c'x s.t. A x = b, x >= 0, with b >= 0.
class StandardFormSimplex {
 public:
  StandardFormSimplex(std::vector<std::vector<mpq_class>> A, std::vector<mpq_class> b,
                      std::vector<mpq_class> c)
      : rows_(A.size()), cols_(c.size()), cost_(std::move(c)) {
    // columns: originals [0, cols_), artificials [cols_, cols_ + rows_), rhs last
    width_ = cols_ + rows_ + 1;
    tableau_.assign(rows_, std::vector<mpq_class>(width_, 0));
    basis_.resize(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t j = 0; j < cols_; ++j) tableau_[r][j] = A[r][j];
      tableau_[r][cols_ + r] = 1;
      tableau_[r][width_ - 1] = b[r];
      basis_[r] = cols_ + r;
    }
  }

  // Returns the optimal value; fills `x` with the primal solution.
  mpq_class run(std::vector<mpq_class>& x) {
    // phase 1: minimize the sum of artificials
    reduced_.assign(width_ - 1, 0);
    value_ = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= tableau_[r][j];
      value_ += tableau_[r][width_ - 1];
    }
    iterate(width_ - 1);
    if (sgn(value_) != 0) throw LpError("LP is infeasible");

    // drive zero-level artificials out of the basis where possible
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < cols_) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (sgn(tableau_[r][j]) != 0) {
          pivot(r, j);
          break;
        }
      }
    }

    // phase 2
    reduced_.assign(width_ - 1, 0);
    for (std::size_t j = 0; j < cols_; ++j) reduced_[j] = cost_[j];
    value_ = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const std::size_t bj = basis_[r];
      if (bj >= cols_ || sgn(cost_[bj]) == 0) continue;
      const mpq_class cb = cost_[bj];
      for (std::size_t j = 0; j < width_ - 1; ++j) {
        if (sgn(tableau_[r][j]) != 0) reduced_[j] -= cb * tableau_[r][j];
      }
      value_ += cb * tableau_[r][width_ - 1];
    }
    iterate(cols_);

    x.assign(cols_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < cols_) x[basis_[r]] = tableau_[r][width_ - 1];
    }
    return value_;
  }

  std::size_t pivots() const { return pivots_; }

 private:
  // Bland's rule: lowest-index improving column, ties in the ratio test go
  // to the lowest basic index.
  void iterate(std::size_t allowed) {
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (sgn(reduced_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == allowed) return;

      std::optional<std::size_t> leave;
      mpq_class best;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (sgn(tableau_[r][enter]) <= 0) continue;
        mpq_class ratio = tableau_[r][width_ - 1] / tableau_[r][enter];
        if (!leave || ratio < best || (ratio == best && basis_[r] < basis_[*leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (!leave) throw LpError("LP is unbounded");
      pivot(*leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t e) {
    ++pivots_;
    auto& prow = tableau_[r];
    const mpq_class inv = 1 / prow[e];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < width_; ++j) {
      if (sgn(prow[j]) != 0) {
        prow[j] *= inv;
        nz.push_back(j);
      }
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || sgn(tableau_[i][e]) == 0) continue;
      const mpq_class f = tableau_[i][e];
      for (std::size_t j : nz) tableau_[i][j] -= f * prow[j];
    }
    if (sgn(reduced_[e]) != 0) {
      const mpq_class f = reduced_[e];
      for (std::size_t j : nz) {
        if (j + 1 < width_) reduced_[j] -= f * prow[j];
      }
      value_ += f * prow[width_ - 1];
    }
    basis_[r] = e;
  }

  std::size_t rows_, cols_, width_ = 0;
  std::vector<mpq_class> cost_;
  std::vector<std::vector<mpq_class>> tableau_;
  std::vector<std::size_t> basis_;
  std::vector<mpq_class> reduced_;
  mpq_class value_;
  std::size_t pivots_ = 0;
};

}  // namespace detail

struct DenseSolution {
  mpq_class value;
  std::vector<mpq_class> x;
  std::size_t pivots = 0;
};

// Exact optimum of a DenseLP. Throws LpError when infeasible or unbounded.
inline DenseSolution solve_dense(const DenseLP& lp) {
  const std::size_t vars = lp.cost.size();
  // x_k = shift_k + sum sign * x'_col over the standard-form columns of k
  struct Map {
    mpq_class shift = 0;
    std::size_t col = 0;
    int sign = 1;
    std::optional<std::size_t> neg_col;  // free variables
  };
  std::vector<Map> map(vars);
  std::size_t cols = 0;
  std::vector<std::pair<std::size_t, mpq_class>> upper_rows;  // x'_col <= width
  for (std::size_t k = 0; k < vars; ++k) {
    if (lp.lo[k]) {
      map[k].shift = *lp.lo[k];
      map[k].col = cols++;
      if (lp.hi[k]) upper_rows.emplace_back(map[k].col, *lp.hi[k] - *lp.lo[k]);
    } else if (lp.hi[k]) {
      map[k].shift = *lp.hi[k];
      map[k].sign = -1;
      map[k].col = cols++;
    } else {
      map[k].col = cols++;
      map[k].neg_col = cols++;
    }
  }
  const std::size_t structural = cols;
  const std::size_t rows = lp.rows.size() + upper_rows.size();
  const std::size_t total = structural + rows;  // one slack/surplus per row

  std::vector<std::vector<mpq_class>> A(rows, std::vector<mpq_class>(total, 0));
  std::vector<mpq_class> b(rows, 0);
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    mpq_class rhs = lp.rhs[r];
    for (std::size_t k = 0; k < vars; ++k) {
      const mpq_class& g = lp.rows[r][k];
      if (sgn(g) == 0) continue;
      rhs -= g * map[k].shift;
      A[r][map[k].col] += map[k].sign * g;
      if (map[k].neg_col) A[r][*map[k].neg_col] -= g;
    }
    A[r][structural + r] = -1;  // surplus
    b[r] = rhs;
  }
  for (std::size_t u = 0; u < upper_rows.size(); ++u) {
    const std::size_t r = lp.rows.size() + u;
    A[r][upper_rows[u].first] = 1;
    A[r][structural + r] = 1;  // slack
    b[r] = upper_rows[u].second;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (sgn(b[r]) < 0) {
      b[r] = -b[r];
      for (auto& entry : A[r]) entry = -entry;
    }
  }

  std::vector<mpq_class> c(total, 0);
  mpq_class constant = 0;
  for (std::size_t k = 0; k < vars; ++k) {
    constant += lp.cost[k] * map[k].shift;
    c[map[k].col] += map[k].sign * lp.cost[k];
    if (map[k].neg_col) c[*map[k].neg_col] -= lp.cost[k];
  }

  detail::StandardFormSimplex simplex(std::move(A), std::move(b), std::move(c));
  std::vector<mpq_class> xs;
  DenseSolution out;
  out.value = simplex.run(xs) + constant;
  out.pivots = simplex.pivots();
  out.x.resize(vars);
  for (std::size_t k = 0; k < vars; ++k) {
    out.x[k] = map[k].shift + map[k].sign * xs[map[k].col];
    if (map[k].neg_col) out.x[k] -= xs[*map[k].neg_col];
  }
  return out;
}

struct ExactLpResult {
  mpq_class exact;
  double value = 0.0;
  std::vector<double> phi;
  std::vector<double> lam;
  std::size_t pivots = 0;
};

inline constexpr std::size_t kDefaultSizeLimit = 300;

// Exact optimum of the spec's linearization. Throws LpError if the LP is
// unbounded or m + n + p exceeds `size_limit`.
inline ExactLpResult lp_solve_exact(const ProblemSpec& spec,
                                    std::size_t size_limit = kDefaultSizeLimit) {
  if (spec.m() + spec.n() + spec.p() > size_limit) {
    throw LpError("instance too large for the exact oracle (m + n + p = " +
                  std::to_string(spec.m() + spec.n() + spec.p()) + ")");
  }
  const DenseSolution sol = solve_dense(to_dense_lp(spec));
  ExactLpResult out;
  out.exact = sol.value;
  out.value = sol.value.get_d();
  out.pivots = sol.pivots;
  for (std::size_t i = 0; i < spec.m(); ++i) out.phi.push_back(sol.x[i].get_d());
  for (std::size_t i = 0; i < spec.n(); ++i) out.lam.push_back(sol.x[spec.m() + i].get_d());
  return out;
}

// Edmonds-Karp maximum flow value.
inline double maxflow_reference(const FlowNetwork& net) {
  struct Edge {
    std::size_t to;
    double cap;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> adj(net.num_nodes);
  for (const Arc& arc : net.arcs) {
    if (arc.capacity < 0.0) throw std::invalid_argument("negative capacity");
    adj[arc.from].push_back(edges.size());
    edges.push_back({arc.to, arc.capacity});
    adj[arc.to].push_back(edges.size());
    edges.push_back({arc.from, 0.0});
  }
  if (net.source == net.sink) return 0.0;

  double flow = 0.0;
  std::vector<std::optional<std::size_t>> via(net.num_nodes);
  for (;;) {
    std::fill(via.begin(), via.end(), std::nullopt);
    std::deque<std::size_t> queue{net.source};
    std::vector<bool> seen(net.num_nodes, false);
    seen[net.source] = true;
    while (!queue.empty() && !seen[net.sink]) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t id : adj[u]) {
        const Edge& e = edges[id];
        if (e.cap > 0.0 && !seen[e.to]) {
          seen[e.to] = true;
          via[e.to] = id;
          queue.push_back(e.to);
        }
      }
    }
    if (!seen[net.sink]) break;
    double push = std::numeric_limits<double>::infinity();
    for (std::size_t v = net.sink; v != net.source; v = edges[*via[v] ^ 1].to) {
      push = std::min(push, edges[*via[v]].cap);
    }
    for (std::size_t v = net.sink; v != net.source; v = edges[*via[v] ^ 1].to) {
      edges[*via[v]].cap -= push;
      edges[*via[v] ^ 1].cap += push;
    }
    flow += push;
  }
  return flow;
}

struct BruteForceMinimum {
  bool unbounded = false;
  double value = 0.0;
  double lo = 0.0;  // minimizer interval, possibly infinite ends
  double hi = 0.0;
};

// Minimizes f on [lo, hi] by evaluation: at every breakpoint inside the box,
// at finite box ends, at midpoints between consecutive points, and one unit
// beyond the extreme points on infinite sides to read off the ray slopes.
inline BruteForceMinimum brute_force_univariate(const PiecewiseAffine& f, double lo, double hi) {
  std::vector<double> pts;
  for (const Hinge& h : f.hinges) {
    const double x = h.breakpoint();
    if (x >= lo && x <= hi) pts.push_back(x);
  }
  if (std::isfinite(lo)) pts.push_back(lo);
  if (std::isfinite(hi)) pts.push_back(hi);
  if (pts.empty()) pts.push_back(0.0);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  BruteForceMinimum out;
  const double left_ray = std::isfinite(lo) ? 0.0 : f(pts.front()) - f(pts.front() - 1.0);
  const double right_ray = std::isfinite(hi) ? 0.0 : f(pts.back() + 1.0) - f(pts.back());
  if (left_ray > 0.0 || right_ray < 0.0) {
    out.unbounded = true;
    return out;
  }

  std::vector<double> values(pts.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    values[k] = f(pts[k]);
    best = std::min(best, values[k]);
    if (k + 1 < pts.size()) best = std::min(best, f(0.5 * (pts[k] + pts[k + 1])));
  }
  const double tol = 1e-12 * (1.0 + std::abs(best));
  std::size_t first = pts.size(), last = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (values[k] <= best + tol) {
      first = std::min(first, k);
      last = k;
    }
  }
  out.value = best;
  out.lo = pts[first];
  out.hi = pts[last];
  if (first == 0 && !std::isfinite(lo) && left_ray == 0.0) out.lo = -kInf;
  if (last + 1 == pts.size() && !std::isfinite(hi) && right_ray == 0.0) out.hi = kInf;
  return out;
}

}  // namespace cwm::oracle
