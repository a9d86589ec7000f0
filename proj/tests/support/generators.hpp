#pragma once

// Seeded random instance generators shared by the unit tests, the acceptance
// runner and the CLI bench data builder.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "cwm/instances.hpp"
#include "cwm/model.hpp"
#include "cwm/univariate.hpp"

namespace cwm::gen {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

struct MaxSatShape {
  int vars_min = 20, vars_max = 40;
  int clauses_min = 40, clauses_max = 120;
  int len_min = 1, len_max = 2;
  int weight_max = 10;
  double hard_fraction = 0.1;
  bool require_unit = true;
};

inline MaxSatFormula random_maxsat(Rng& rng, const MaxSatShape& shape = {}) {
  MaxSatFormula f;
  f.num_vars = uniform_int(rng, shape.vars_min, shape.vars_max);
  const int clauses = uniform_int(rng, shape.clauses_min, shape.clauses_max);
  // Hard clauses agree with a planted assignment so the hard part stays satisfiable.
  std::vector<bool> planted(static_cast<std::size_t>(f.num_vars) + 1);
  for (auto&& bit : planted) bit = coin(rng);
  for (int c = 0; c < clauses; ++c) {
    Clause clause;
    const int len = std::min(uniform_int(rng, shape.len_min, shape.len_max), f.num_vars);
    std::set<int> used;
    while (static_cast<int>(clause.literals.size()) < len) {
      const int var = uniform_int(rng, 1, f.num_vars);
      if (!used.insert(var).second) continue;
      clause.literals.push_back(coin(rng) ? var : -var);
    }
    clause.hard = coin(rng, shape.hard_fraction);
    if (clause.hard) {
      const int var = std::abs(clause.literals.front());
      clause.literals.front() = planted[static_cast<std::size_t>(var)] ? var : -var;
    }
    clause.weight = clause.hard ? 0.0 : uniform_int(rng, 1, shape.weight_max);
    f.clauses.push_back(std::move(clause));
  }
  if (shape.require_unit) {
    const bool has_unit = std::any_of(f.clauses.begin(), f.clauses.end(),
                                      [](const Clause& c) { return c.literals.size() == 1; });
    if (!has_unit) {
      const int var = uniform_int(rng, 1, f.num_vars);
      f.clauses.push_back({{coin(rng) ? var : -var}, double(uniform_int(rng, 1, shape.weight_max)),
                           false});
    }
  }
  return f;
}

// Arcs never enter the source, leave the sink, join source to sink directly,
// or repeat an ordered pair.
inline FlowNetwork random_flow_network(Rng& rng, int max_nodes = 100, int max_arcs = 200,
                                       int max_cap = 20) {
  FlowNetwork net;
  net.num_nodes = static_cast<std::size_t>(uniform_int(rng, 3, max_nodes));
  net.source = 0;
  net.sink = net.num_nodes - 1;
  const int arcs = uniform_int(rng, 1, max_arcs);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  const int last = static_cast<int>(net.num_nodes) - 1;
  for (int attempt = 0; static_cast<int>(net.arcs.size()) < arcs && attempt < 20 * arcs;
       ++attempt) {
    const auto u = static_cast<std::size_t>(uniform_int(rng, 0, last - 1));
    const auto v = static_cast<std::size_t>(uniform_int(rng, 1, last));
    if (u == v || (u == net.source && v == net.sink)) continue;
    if (!seen.insert({u, v}).second) continue;
    net.arcs.push_back({u, v, double(uniform_int(rng, 0, max_cap))});
  }
  return net;
}

inline WeightedGraph random_graph(Rng& rng, int max_nodes = 15, int max_weight = 10) {
  WeightedGraph g;
  const int nodes = uniform_int(rng, 2, max_nodes);
  for (int i = 0; i < nodes; ++i) g.weights.push_back(uniform_int(rng, 1, max_weight));
  for (int u = 0; u < nodes; ++u) {
    for (int v = u + 1; v < nodes; ++v) {
      if (coin(rng, 0.3)) g.edges.emplace_back(u, v);
    }
  }
  return g;
}

inline PottsModel random_potts(Rng& rng, std::size_t labels, int max_nodes = 8) {
  PottsModel model;
  model.num_labels = labels;
  const int nodes = uniform_int(rng, 1, max_nodes);
  for (int i = 0; i < nodes; ++i) {
    std::vector<double> theta;
    for (std::size_t k = 0; k < labels; ++k) theta.push_back(uniform_int(rng, -5, 5));
    model.unary.push_back(std::move(theta));
  }
  for (int u = 0; u < nodes; ++u) {
    for (int v = u + 1; v < nodes; ++v) {
      if (coin(rng, 0.35)) {
        if (coin(rng)) {
          model.edges.emplace_back(u, v);
        } else {
          model.edges.emplace_back(v, u);
        }
      }
    }
  }
  return model;
}

struct GuaranteeShape {
  int m_max = 12, n_max = 12, p_max = 20;
  bool finite_bounds = true;
};

// Rows with at most two +-1 entries in distinct columns, admissible linear
// coefficients, integer w, v and bounds.
inline ProblemSpec random_guarantee_spec(Rng& rng, const GuaranteeShape& shape = {}) {
  static constexpr int kA[] = {-4, -3, -2, -1, 0, 1, 2, 3, 4};
  static constexpr int kB[] = {-3, -2, -1, 0, 1, 2, 3};
  ProblemData d;
  d.m = static_cast<std::size_t>(uniform_int(rng, 0, shape.m_max));
  d.n = static_cast<std::size_t>(uniform_int(rng, 0, shape.n_max));
  d.p = static_cast<std::size_t>(uniform_int(rng, 1, shape.p_max));

  auto row = [&](std::vector<Triplet>& out, std::size_t i) {
    const int count = uniform_int(rng, 0, std::min<int>(2, static_cast<int>(d.p)));
    std::set<std::size_t> cols;
    while (static_cast<int>(cols.size()) < count) {
      cols.insert(static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(d.p) - 1)));
    }
    for (std::size_t j : cols) out.push_back({i, j, coin(rng) ? 1.0 : -1.0});
  };
  auto bounds = [&](std::vector<double>& lo, std::vector<double>& hi) {
    int l = uniform_int(rng, -6, 5);
    int h = uniform_int(rng, l + 1, 7);
    lo.push_back(l);
    hi.push_back(h);
    if (!shape.finite_bounds) {
      if (coin(rng, 0.25)) lo.back() = -kInf;
      if (coin(rng, 0.25)) hi.back() = kInf;
    }
  };
  for (std::size_t i = 0; i < d.m; ++i) {
    row(d.A, i);
    d.a.push_back(kA[uniform_int(rng, 0, 8)]);
    d.w.push_back(uniform_int(rng, -3, 6));
    bounds(d.phi_lo, d.phi_hi);
  }
  for (std::size_t i = 0; i < d.n; ++i) {
    row(d.B, i);
    d.b.push_back(kB[uniform_int(rng, 0, 6)]);
    bounds(d.lam_lo, d.lam_hi);
  }
  for (std::size_t j = 0; j < d.p; ++j) d.v.push_back(uniform_int(rng, -5, 5));
  return ProblemSpec(std::move(d));
}

// Unit-magnitude hinge coefficients, integer breakpoints and slope.
inline PiecewiseAffine random_unit_piecewise(Rng& rng, int max_hinges = 6) {
  PiecewiseAffine f;
  const int hinges = uniform_int(rng, 0, max_hinges);
  for (int k = 0; k < hinges; ++k) {
    f.hinges.push_back({coin(rng) ? 1.0 : -1.0, double(uniform_int(rng, -8, 8))});
  }
  f.slope = uniform_int(rng, -3, 3);
  f.offset = uniform_int(rng, -5, 5);
  return f;
}

}  // namespace cwm::gen
