#pragma once

// Encoders from combinatorial problems to the hinge-sum form and decoders
// from solver output back to application terms. Each encoder builds the
// primal whose linear-programming dual is the usual relaxation of the
// application problem.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cwm/duality.hpp"
#include "cwm/instances.hpp"
#include "cwm/model.hpp"
#include "cwm/solver.hpp"

namespace cwm {

enum class ProblemKind { kMaxSat, kMinOnes, kVertexCover, kMaxFlow, kPotts };

inline const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kMaxSat: return "maxsat";
    case ProblemKind::kMinOnes: return "min-ones";
    case ProblemKind::kVertexCover: return "vertex-cover";
    case ProblemKind::kMaxFlow: return "maxflow";
    case ProblemKind::kPotts: return "potts";
  }
  return "unknown";
}

// application value = sign * (spec objective) + offset
struct ObjectiveTransform {
  double sign = 1.0;
  double offset = 0.0;

  double apply(double lp_value) const { return sign * lp_value + offset; }
};

// Where each spec index comes from. Entries are application indices:
// phi_source - soft clause / arc / node (Potts, K >= 3)
// lam_source - hard clause / edge; lam_label is the label for Potts
// col_source - variable / node / node (Potts); col_label for Potts K >= 3
struct IndexMap {
  std::vector<std::size_t> phi_source;
  std::vector<std::size_t> lam_source;
  std::vector<std::size_t> lam_label;
  std::vector<std::size_t> col_source;
  std::vector<std::size_t> col_label;
  std::vector<std::optional<std::size_t>> node_column;  // max-flow only
};

using Application = std::variant<MaxSatFormula, WeightedGraph, FlowNetwork, PottsModel>;

struct EncodedInstance {
  ProblemKind kind = ProblemKind::kMaxSat;
  ProblemSpec spec;
  IndexMap index;
  ObjectiveTransform transform;
  Application source;
};

// ---------------------------------------------------------------------------
// Max-SAT

struct MaxSatOptions {
  // Drop soft clauses and charge every true variable one unit (v = -1).
  bool min_ones = false;
};

inline EncodedInstance encode_maxsat(const MaxSatFormula& formula, MaxSatOptions options = {}) {
  if (formula.num_vars < 0) throw std::invalid_argument("negative variable count");
  const auto p = static_cast<std::size_t>(formula.num_vars);

  EncodedInstance inst;
  inst.kind = options.min_ones ? ProblemKind::kMinOnes : ProblemKind::kMaxSat;
  inst.source = formula;

  ProblemData data;
  data.p = p;
  data.v.assign(p, options.min_ones ? -1.0 : 0.0);
  double tautology_weight = 0.0;

  for (std::size_t c = 0; c < formula.clauses.size(); ++c) {
    const Clause& clause = formula.clauses[c];
    std::map<std::size_t, int> signs;  // variable -> +1, -1, or 0 for x v -x
    for (int lit : clause.literals) {
      if (lit == 0 || std::abs(lit) > formula.num_vars) {
        throw std::invalid_argument("clause " + std::to_string(c + 1) + " references variable " +
                                    std::to_string(lit) + " outside 1.." +
                                    std::to_string(formula.num_vars));
      }
      const std::size_t var = static_cast<std::size_t>(std::abs(lit)) - 1;
      const int sign = lit > 0 ? 1 : -1;
      auto [it, fresh] = signs.emplace(var, sign);
      if (!fresh && it->second != sign) it->second = 0;
    }
    const bool tautology =
        std::any_of(signs.begin(), signs.end(), [](const auto& kv) { return kv.second == 0; });
    double negated = 0.0;
    for (const auto& [var, sign] : signs) negated += sign < 0 ? 1.0 : 0.0;

    if (clause.hard) {
      if (tautology) continue;
      const std::size_t row = data.n++;
      for (const auto& [var, sign] : signs) data.B.push_back({row, var, -double(sign)});
      data.b.push_back(1.0 - negated);
      data.lam_lo.push_back(-kInf);
      data.lam_hi.push_back(0.0);
      inst.index.lam_source.push_back(c);
    } else {
      if (clause.weight < 0.0) {
        throw std::invalid_argument("clause " + std::to_string(c + 1) + " has negative weight");
      }
      if (options.min_ones) {
        throw std::invalid_argument("min-ones encoding accepts hard clauses only");
      }
      if (tautology) {
        tautology_weight += clause.weight;
        continue;
      }
      const std::size_t row = data.m++;
      for (const auto& [var, sign] : signs) data.A.push_back({row, var, double(sign)});
      data.a.push_back(negated);
      data.w.push_back(clause.weight);
      data.phi_lo.push_back(0.0);
      data.phi_hi.push_back(kInf);
      inst.index.phi_source.push_back(c);
    }
  }
  for (std::size_t j = 0; j < p; ++j) inst.index.col_source.push_back(j);

  inst.spec = ProblemSpec(std::move(data));
  inst.transform = options.min_ones ? ObjectiveTransform{-1.0, 0.0}
                                    : ObjectiveTransform{1.0, tautology_weight};
  return inst;
}

// ---------------------------------------------------------------------------
// Weighted vertex cover

inline EncodedInstance encode_vertex_cover(const WeightedGraph& graph) {
  const std::size_t nodes = graph.weights.size();
  ProblemData data;
  data.p = nodes;
  for (std::size_t j = 0; j < nodes; ++j) {
    if (graph.weights[j] < 0.0) {
      throw std::invalid_argument("node " + std::to_string(j) + " has negative weight");
    }
    data.v.push_back(-graph.weights[j]);
  }
  EncodedInstance inst;
  inst.kind = ProblemKind::kVertexCover;
  inst.source = graph;
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto [u, v] = graph.edges[e];
    if (u >= nodes || v >= nodes) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(u));
    data.B.push_back({e, u, 1.0});
    data.B.push_back({e, v, 1.0});
    data.b.push_back(-1.0);
    data.lam_lo.push_back(0.0);
    data.lam_hi.push_back(kInf);
    inst.index.lam_source.push_back(e);
  }
  data.n = graph.edges.size();
  for (std::size_t j = 0; j < nodes; ++j) inst.index.col_source.push_back(j);
  inst.spec = ProblemSpec(std::move(data));
  inst.transform = {-1.0, 0.0};
  return inst;
}

// ---------------------------------------------------------------------------
// Maximum flow / minimum st-cut

inline EncodedInstance encode_maxflow(const FlowNetwork& net) {
  const std::size_t s = net.source, t = net.sink;
  if (s >= net.num_nodes || t >= net.num_nodes) {
    throw std::invalid_argument("source or sink out of range");
  }
  if (s == t) throw std::invalid_argument("source equals sink");

  EncodedInstance inst;
  inst.kind = ProblemKind::kMaxFlow;
  inst.source = net;
  inst.index.node_column.assign(net.num_nodes, std::nullopt);
  std::size_t columns = 0;
  for (std::size_t u = 0; u < net.num_nodes; ++u) {
    if (u == s || u == t) continue;
    inst.index.node_column[u] = columns++;
    inst.index.col_source.push_back(u);
  }

  ProblemData data;
  data.m = net.arcs.size();
  data.p = columns;
  double total = 0.0;
  for (std::size_t k = 0; k < net.arcs.size(); ++k) {
    const Arc& arc = net.arcs[k];
    const std::string where = "arc " + std::to_string(k + 1);
    if (arc.from >= net.num_nodes || arc.to >= net.num_nodes) {
      throw std::invalid_argument(where + " has an endpoint out of range");
    }
    if (arc.capacity < 0.0) throw std::invalid_argument(where + " has negative capacity");
    if (arc.from == arc.to) throw std::invalid_argument(where + " is a self-loop");
    if (arc.from == s && arc.to == t) throw std::invalid_argument(where + " joins source to sink");
    if (arc.to == s) throw std::invalid_argument(where + " enters the source");
    if (arc.from == t) throw std::invalid_argument(where + " leaves the sink");

    if (auto col = inst.index.node_column[arc.to]) data.A.push_back({k, *col, 1.0});
    if (auto col = inst.index.node_column[arc.from]) data.A.push_back({k, *col, -1.0});
    data.w.push_back(arc.capacity);
    data.a.push_back(arc.from == s ? 0.0 : 1.0);
    data.phi_lo.push_back(0.0);
    data.phi_hi.push_back(kInf);
    inst.index.phi_source.push_back(k);
    total += arc.capacity;
  }
  inst.spec = ProblemSpec(std::move(data));
  inst.transform = {-1.0, total};
  return inst;
}

// ---------------------------------------------------------------------------
// Potts MAP inference

// Two labels: one lambda in [-1/2, 1/2] per (edge, label), one hinge column
// per node carrying theta_i(0) - theta_i(1); the last label's potentials sum
// to a constant. With K >= 3 labels each node gets an auxiliary phi_i >= 0
// and one column per non-reference label, so that
//   max_k theta_i(k) = theta_i(ref) + min_{u >= 0} u + sum_k max{d_k - u, 0}
// holds exactly; such specs fall outside the guarantee class.
inline EncodedInstance encode_potts(const PottsModel& model) {
  const std::size_t K = model.num_labels;
  if (K < 2) throw std::invalid_argument("Potts model needs at least two labels");
  const std::size_t nodes = model.unary.size();
  for (std::size_t i = 0; i < nodes; ++i) {
    if (model.unary[i].size() != K) {
      throw std::invalid_argument("node " + std::to_string(i) + " has " +
                                  std::to_string(model.unary[i].size()) + " potentials, expected " +
                                  std::to_string(K));
    }
  }

  EncodedInstance inst;
  inst.kind = ProblemKind::kPotts;
  PottsModel oriented = model;
  for (auto& [u, v] : oriented.edges) {
    if (u >= nodes || v >= nodes) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }

  const std::size_t ref = K - 1;
  ProblemData data;
  double offset = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) offset += model.unary[i][ref];

  // column index of (node, label) for label != ref
  auto column = [&](std::size_t i, std::size_t k) { return K == 2 ? i : i * (K - 1) + k; };

  if (K == 2) {
    data.p = nodes;
    for (std::size_t i = 0; i < nodes; ++i) {
      data.v.push_back(model.unary[i][0] - model.unary[i][1]);
      inst.index.col_source.push_back(i);
      inst.index.col_label.push_back(0);
    }
  } else {
    data.m = nodes;
    data.p = nodes * (K - 1);
    for (std::size_t i = 0; i < nodes; ++i) {
      data.w.push_back(0.0);
      data.a.push_back(1.0);
      data.phi_lo.push_back(0.0);
      data.phi_hi.push_back(kInf);
      inst.index.phi_source.push_back(i);
      for (std::size_t k = 0; k < K - 1; ++k) {
        data.v.push_back(model.unary[i][k] - model.unary[i][ref]);
        data.A.push_back({i, column(i, k), -1.0});
        inst.index.col_source.push_back(i);
        inst.index.col_label.push_back(k);
      }
    }
  }

  for (std::size_t e = 0; e < oriented.edges.size(); ++e) {
    const auto [tail, head] = oriented.edges[e];
    for (std::size_t k = 0; k < K; ++k) {
      const std::size_t row = data.n++;
      if (k != ref) {
        data.B.push_back({row, column(tail, k), 1.0});
        data.B.push_back({row, column(head, k), -1.0});
      } else {
        for (std::size_t l = 0; l < K - 1; ++l) {
          data.B.push_back({row, column(tail, l), -1.0});
          data.B.push_back({row, column(head, l), 1.0});
        }
      }
      data.b.push_back(0.0);
      data.lam_lo.push_back(-0.5);
      data.lam_hi.push_back(0.5);
      inst.index.lam_source.push_back(e);
      inst.index.lam_label.push_back(k);
    }
  }

  inst.spec = ProblemSpec(std::move(data));
  inst.transform = {1.0, offset};
  inst.source = std::move(oriented);
  return inst;
}

// ---------------------------------------------------------------------------
// Decoding

struct MaxSatSolution {
  std::vector<double> assignment;  // fractional, in {0, 1/2, 1} at an optimum
  double lp_bound = 0.0;
  // No clause of length one: x = 1/2 everywhere is already optimal.
  bool trivial_half_optimum = false;
};

struct VertexCoverSolution {
  std::vector<double> cover;
  double value = 0.0;
};

enum class CutSide { kSource, kSink, kFractional };

struct CutSolution {
  double cut_value = 0.0;
  std::vector<CutSide> side;  // per node
};

struct PottsSolution {
  std::vector<std::vector<double>> reparametrized;  // theta^lambda_i(k)
  std::vector<std::size_t> labeling;                // per-node argmax
  double lp_bound = 0.0;
};

using DecodedSolution =
    std::variant<MaxSatSolution, VertexCoverSolution, CutSolution, PottsSolution>;

inline DecodedSolution decode(const EncodedInstance& inst, const SolveResult& result,
                              const DualCertificate& cert) {
  const ProblemSpec& spec = inst.spec;
  if (result.phi.size() != spec.m() || result.lam.size() != spec.n() ||
      cert.x.size() != spec.p()) {
    throw std::invalid_argument("solve result does not belong to this instance");
  }
  const double lp_value = inst.transform.apply(result.objective_value);

  switch (inst.kind) {
    case ProblemKind::kMaxSat:
    case ProblemKind::kMinOnes: {
      const auto& formula = std::get<MaxSatFormula>(inst.source);
      MaxSatSolution out;
      out.assignment = cert.x;
      out.lp_bound = lp_value;
      out.trivial_half_optimum = std::none_of(
          formula.clauses.begin(), formula.clauses.end(),
          [](const Clause& c) { return c.literals.size() == 1; });
      return out;
    }
    case ProblemKind::kVertexCover:
      return VertexCoverSolution{cert.x, lp_value};
    case ProblemKind::kMaxFlow: {
      const auto& net = std::get<FlowNetwork>(inst.source);
      CutSolution out;
      double total = 0.0;
      for (const Arc& arc : net.arcs) total += arc.capacity;
      out.cut_value = total - dual_objective(spec, cert);
      out.side.resize(net.num_nodes);
      for (std::size_t u = 0; u < net.num_nodes; ++u) {
        if (u == net.source) {
          out.side[u] = CutSide::kSource;
        } else if (u == net.sink) {
          out.side[u] = CutSide::kSink;
        } else {
          const double x = cert.x[*inst.index.node_column[u]];
          out.side[u] = x == 1.0 ? CutSide::kSource : (x == 0.0 ? CutSide::kSink
                                                                 : CutSide::kFractional);
        }
      }
      return out;
    }
    case ProblemKind::kPotts: {
      const auto& model = std::get<PottsModel>(inst.source);
      const std::size_t K = model.num_labels;
      PottsSolution out;
      out.reparametrized = model.unary;
      for (std::size_t r = 0; r < spec.n(); ++r) {
        const auto [tail, head] = model.edges[inst.index.lam_source[r]];
        const std::size_t k = inst.index.lam_label[r];
        out.reparametrized[tail][k] += result.lam[r];
        out.reparametrized[head][k] -= result.lam[r];
      }
      for (const auto& theta : out.reparametrized) {
        out.labeling.push_back(static_cast<std::size_t>(
            std::max_element(theta.begin(), theta.end()) - theta.begin()));
      }
      (void)K;
      out.lp_bound = lp_value;
      return out;
    }
  }
  throw std::logic_error("unknown problem kind");
}

// Application value recomputed from a decoded solution alone: LP value of the
// fractional assignment / cover / cut, or the reparametrized Potts bound.
inline double application_value(const EncodedInstance& inst, const DecodedSolution& solution) {
  switch (inst.kind) {
    case ProblemKind::kMaxSat: {
      const auto& formula = std::get<MaxSatFormula>(inst.source);
      const auto& x = std::get<MaxSatSolution>(solution).assignment;
      double value = 0.0;
      for (const Clause& c : formula.clauses) {
        if (c.hard) continue;
        std::map<int, int> signs;
        for (int lit : c.literals) {
          auto [it, fresh] = signs.emplace(std::abs(lit), lit > 0 ? 1 : -1);
          if (!fresh && it->second != (lit > 0 ? 1 : -1)) it->second = 0;
        }
        double sat = 0.0;
        for (const auto& [var, sign] : signs) {
          const double xv = x[static_cast<std::size_t>(var) - 1];
          sat += sign == 0 ? 1.0 : (sign > 0 ? xv : 1.0 - xv);
        }
        value += c.weight * std::min(1.0, sat);
      }
      return value;
    }
    case ProblemKind::kMinOnes: {
      const auto& x = std::get<MaxSatSolution>(solution).assignment;
      double value = 0.0;
      for (double xv : x) value += xv;
      return value;
    }
    case ProblemKind::kVertexCover: {
      const auto& graph = std::get<WeightedGraph>(inst.source);
      const auto& x = std::get<VertexCoverSolution>(solution).cover;
      double value = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) value += graph.weights[j] * x[j];
      return value;
    }
    case ProblemKind::kMaxFlow: {
      const auto& net = std::get<FlowNetwork>(inst.source);
      const auto& cut = std::get<CutSolution>(solution);
      auto level = [&](std::size_t u) {
        switch (cut.side[u]) {
          case CutSide::kSource: return 1.0;
          case CutSide::kSink: return 0.0;
          case CutSide::kFractional: return 0.5;
        }
        return 0.5;
      };
      double value = 0.0;
      for (const Arc& arc : net.arcs) {
        value += arc.capacity * std::max(0.0, level(arc.from) - level(arc.to));
      }
      return value;
    }
    case ProblemKind::kPotts: {
      double value = 0.0;
      for (const auto& theta : std::get<PottsSolution>(solution).reparametrized) {
        value += *std::max_element(theta.begin(), theta.end());
      }
      return value;
    }
  }
  throw std::logic_error("unknown problem kind");
}

}  // namespace cwm
