#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bplab/bp.hpp"
#include "bplab/instance.hpp"

namespace bplab {

struct WeightedEdge {
  int left = 0;
  int right = 0;
  std::int64_t scaled_weight = 0;

  friend auto operator<=>(const WeightedEdge&, const WeightedEdge&) = default;
};

struct ConflictEdge {
  int left = 0;
  int right = 0;
  std::int64_t scaled_weight = 0;
  bool left_believes = true; // otherwise the right endpoint holds the belief
};

/// Uncovered nodes of the partial BP matching and the edges on which
/// exactly one endpoint believes. Each uncovered node believes at most one
/// edge, so every component has at most as many edges as nodes.
struct ConflictGraph {
  int n = 0;
  std::vector<int> left_nodes;
  std::vector<int> right_nodes;
  std::vector<ConflictEdge> edges; // sorted by (left, right)
};

ConflictGraph build_conflict_graph(const Instance& inst, const BeliefSnapshot& snapshot);

struct ConflictComponent {
  std::vector<int> left_nodes;
  std::vector<int> right_nodes;
  std::vector<ConflictEdge> edges;

  std::size_t node_count() const { return left_nodes.size() + right_nodes.size(); }
  bool has_cycle() const { return !edges.empty() && edges.size() == node_count(); }
};

/// Connected components ordered by their smallest node (left before right).
std::vector<ConflictComponent> conflict_components(const ConflictGraph& graph);

/// Edges of the unique cycle of a component, sorted; empty when acyclic.
std::vector<ConflictEdge> component_cycle(const ConflictComponent& component);

/// Maximum-weight matching of an acyclic edge set. Nodes are optional and
/// an edge is only taken when it strictly increases the total, so ties
/// resolve toward fewer edges. Throws PreconditionError on a cycle.
std::vector<WeightedEdge> forest_mwm(std::span<const WeightedEdge> forest);

struct BranchRecord {
  WeightedEdge cycle_edge;       // lexicographically smallest cycle edge
  Wide with_edge_scaled = 0;     // W(M_a) + w_e
  Wide without_edge_scaled = 0;  // W(M_b)
  bool took_edge = false;
};

struct ComponentOutcome {
  ConflictComponent component;
  std::optional<BranchRecord> branch;
  std::vector<WeightedEdge> committed;
  Wide committed_scaled = 0;
};

struct CompletionResult {
  Matching matching; // perfect
  Matching partial;  // the partial BP matching it extends
  std::vector<ComponentOutcome> components;
  // Conflict edges left with two free endpoints after the forest stage;
  // only non-positive edges end up here.
  std::vector<WeightedEdge> leftover_pairs;
  std::vector<std::pair<int, int>> greedy_pairs;
};

/// Extends the partial BP matching of `snapshot` to a perfect matching of
/// K_{n,n}: per conflict component an exact max-weight matching (cyclic
/// components via two-case branching on one cycle edge), then any leftover
/// conflict edges, then ascending-index pairing of the rest.
CompletionResult complete(const Instance& inst, const BeliefSnapshot& snapshot);

/// W(completion) / mwm_weight as an exact rational.
Rational approximation_ratio(const Instance& inst, const Matching& completion, const Rational& mwm_weight);

} // namespace bplab
