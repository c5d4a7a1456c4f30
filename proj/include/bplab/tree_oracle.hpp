#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bplab/instance.hpp"

namespace bplab {

/// A node of the original bipartite graph. Left node i has id i, right
/// node j has id n + j.
struct GraphNode {
  enum class Side { left, right };
  Side side = Side::left;
  int index = 0;

  int id(int n) const { return side == Side::left ? index : n + index; }
  static GraphNode from_id(int id, int n) { return id < n ? GraphNode{Side::left, id} : GraphNode{Side::right, id - n}; }
  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

/// Parses "a3" / "b1" (1-based, as in alpha_3 / beta_1).
GraphNode parse_node(std::string_view label);
std::string node_label(GraphNode v);

inline constexpr std::size_t kDefaultTreeCap = 1'000'000;

/// Depth-t unrolling in breadth-first order. Tree node 0 is the root; the
/// children of tree node u are tree nodes [child_begin[u], child_end[u]).
struct ComputationTree {
  int graph_n = 0;
  std::int64_t scale = 1;
  int root = 0;
  std::int64_t depth = 0;
  std::vector<int> label;            // graph node id
  std::vector<int> parent;           // -1 at the root
  std::vector<std::int64_t> weight;  // scaled weight of the edge to the parent
  std::vector<std::int64_t> level;
  std::vector<std::size_t> child_begin;
  std::vector<std::size_t> child_end;

  std::size_t size() const { return label.size(); }
  std::size_t edge_count() const { return size() - 1; }
};

/// Children of u are all graph neighbours of u's label except the label of
/// its tree parent. The node cap applies only when some node has degree 3
/// or more; on cycle-only graphs every tree is a path with 2t edges.
ComputationTree unroll(const Instance& inst, GraphNode root, std::int64_t depth, std::size_t cap = kDefaultTreeCap);

struct RootScore {
  int partner = 0; // graph node id of the root child
  Wide scaled_weight = 0; // best T-matching weight with the root matched to it
};

struct TMatchingResult {
  Wide scaled_weight = 0;
  Rational weight;
  /// Graph node id of the root's partner in the optimum, or kUnresolved
  /// when optima disagree at the root.
  int root_partner = kUnresolved;
  std::vector<RootScore> root_scores;
  /// One optimal T-matching, as the tree nodes whose parent edge is used.
  std::vector<std::size_t> matched_children;
};

/// Maximum-weight T-matching: every inner node is covered, leaves are
/// optional. Linear-time DP with states matched-to-parent / matched-to-child.
TMatchingResult max_t_matching(const ComputationTree& tree);

/// Belief of v at iteration t according to its computation tree, as the
/// partner index on the other side or kUnresolved on a tie.
int oracle_belief(const Instance& inst, GraphNode v, std::int64_t t, std::size_t cap = kDefaultTreeCap);

/// Suboptimal advantage of a tail of half-length l:
/// w_max (n - l) / (2 (n - 1)) - eps (l - 1) / (n - 1).
Rational nibbling_delta(int n, const Rational& w_max, const Rational& eps, int l);

struct TailDecomposition {
  std::int64_t k = 0;
  int l = 0;
};

/// t = k n + l with 0 <= l < n.
TailDecomposition tail_decompose(int n, std::int64_t t);

} // namespace bplab
