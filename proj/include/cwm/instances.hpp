#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace cwm {

// Literals use DIMACS convention: +k is variable k, -k its negation, k >= 1.
struct Clause {
  std::vector<int> literals;
  double weight = 1.0;
  bool hard = false;
};

struct MaxSatFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;
};

// Undirected graph with node weights; nodes are 0-based.
struct WeightedGraph {
  std::vector<double> weights;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

struct Arc {
  std::size_t from = 0;
  std::size_t to = 0;
  double capacity = 0.0;
};

// Directed network; nodes are 0-based.
struct FlowNetwork {
  std::size_t num_nodes = 0;
  std::size_t source = 0;
  std::size_t sink = 0;
  std::vector<Arc> arcs;
};

// Pairwise model with Potts interactions -[k != l]; unary[i][k] is the
// potential of label k at node i. Nodes and labels are 0-based.
struct PottsModel {
  std::size_t num_labels = 2;
  std::vector<std::vector<double>> unary;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

}  // namespace cwm
