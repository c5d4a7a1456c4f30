#include "bplab/tree_oracle.hpp"

#include <algorithm>
#include <charconv>

namespace bplab {

GraphNode parse_node(std::string_view label) {
  if (label.size() < 2 || (label[0] != 'a' && label[0] != 'b'))
    throw PreconditionError("node label must look like a3 or b1");
  int index = 0;
  const auto* begin = label.data() + 1;
  const auto* end = label.data() + label.size();
  auto [ptr, ec] = std::from_chars(begin, end, index);
  if (ec != std::errc{} || ptr != end || index < 1)
    throw PreconditionError("node label must look like a3 or b1");
  return {label[0] == 'a' ? GraphNode::Side::left : GraphNode::Side::right, index - 1};
}

std::string node_label(GraphNode v) {
  return (v.side == GraphNode::Side::left ? "a" : "b") + std::to_string(v.index + 1);
}

namespace {

struct Neighbour {
  int id;
  std::int64_t weight;
};

std::vector<std::vector<Neighbour>> adjacency(const Instance& inst) {
  const int n = inst.size();
  std::vector<std::vector<Neighbour>> adj(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (inst.has_edge(i, j)) {
        adj[static_cast<std::size_t>(i)].push_back({n + j, inst.scaled(i, j)});
        adj[static_cast<std::size_t>(n + j)].push_back({i, inst.scaled(i, j)});
      }
  return adj;
}

} // namespace

ComputationTree unroll(const Instance& inst, GraphNode root, std::int64_t depth, std::size_t cap) {
  const int n = inst.size();
  if (root.index < 0 || root.index >= n)
    throw PreconditionError("root node out of range");
  if (depth < 0)
    throw PreconditionError("tree depth must be non-negative");

  const auto adj = adjacency(inst);
  const bool branching = std::any_of(adj.begin(), adj.end(), [](const auto& a) { return a.size() >= 3; });

  ComputationTree tree;
  tree.graph_n = n;
  tree.scale = inst.scale();
  tree.root = root.id(n);
  tree.depth = depth;
  auto add = [&](int label, int parent, std::int64_t weight, std::int64_t level) {
    if (branching && tree.size() >= cap)
      throw OracleCapExceeded("computation tree exceeds " + std::to_string(cap) + " nodes");
    tree.label.push_back(label);
    tree.parent.push_back(parent);
    tree.weight.push_back(weight);
    tree.level.push_back(level);
    tree.child_begin.push_back(0);
    tree.child_end.push_back(0);
  };

  add(tree.root, -1, 0, 0);
  for (std::size_t u = 0; u < tree.size(); ++u) {
    tree.child_begin[u] = tree.size();
    if (tree.level[u] < depth) {
      const int parent_label = tree.parent[u] < 0 ? -1 : tree.label[static_cast<std::size_t>(tree.parent[u])];
      for (const auto& nb : adj[static_cast<std::size_t>(tree.label[u])])
        if (nb.id != parent_label)
          add(nb.id, static_cast<int>(u), nb.weight, tree.level[u] + 1);
    }
    tree.child_end[u] = tree.size();
  }
  return tree;
}

TMatchingResult max_t_matching(const ComputationTree& tree) {
  const std::size_t size = tree.size();
  // matched_up[u]: best weight below u when u is matched to its parent (the
  // parent edge itself excluded). free_up[u]: best weight when it is not;
  // an inner node then has to be matched to a child.
  std::vector<Wide> matched_up(size, 0), free_up(size, 0);
  for (std::size_t u = size; u-- > 0;) {
    const auto begin = tree.child_begin[u], end = tree.child_end[u];
    if (begin == end)
      continue;
    Wide sum_free = 0, best_gain = 0;
    bool first = true;
    for (auto c = begin; c < end; ++c) {
      sum_free = checked_add(sum_free, free_up[c]);
      const Wide gain = checked_sub(checked_add(matched_up[c], tree.weight[c]), free_up[c]);
      if (first || gain > best_gain)
        best_gain = gain;
      first = false;
    }
    matched_up[u] = sum_free;
    free_up[u] = checked_add(sum_free, best_gain);
  }

  TMatchingResult out;
  out.scaled_weight = free_up[0];
  out.weight = to_rational(out.scaled_weight, tree.scale);
  for (auto c = tree.child_begin[0]; c < tree.child_end[0]; ++c)
    out.root_scores.push_back({tree.label[c], matched_up[0] - free_up[c] + matched_up[c] + tree.weight[c]});
  if (!out.root_scores.empty()) {
    const auto best = std::max_element(out.root_scores.begin(), out.root_scores.end(),
                                       [](const RootScore& a, const RootScore& b) { return a.scaled_weight < b.scaled_weight; });
    const auto ties = std::count_if(out.root_scores.begin(), out.root_scores.end(),
                                    [&](const RootScore& s) { return s.scaled_weight == best->scaled_weight; });
    out.root_partner = ties == 1 ? best->partner : kUnresolved;
  }

  // Top-down reconstruction of one optimum (first best child on ties).
  std::vector<char> is_matched_up(size, 0);
  for (std::size_t u = 0; u < size; ++u) {
    const auto begin = tree.child_begin[u], end = tree.child_end[u];
    if (is_matched_up[u] || begin == end)
      continue;
    std::size_t chosen = begin;
    Wide best_gain = 0;
    for (auto c = begin; c < end; ++c) {
      const Wide gain = matched_up[c] + tree.weight[c] - free_up[c];
      if (c == begin || gain > best_gain) {
        best_gain = gain;
        chosen = c;
      }
    }
    is_matched_up[chosen] = 1;
    out.matched_children.push_back(chosen);
  }
  return out;
}

int oracle_belief(const Instance& inst, GraphNode v, std::int64_t t, std::size_t cap) {
  const auto result = max_t_matching(unroll(inst, v, t, cap));
  if (result.root_partner == kUnresolved)
    return kUnresolved;
  return GraphNode::from_id(result.root_partner, inst.size()).index;
}

Rational nibbling_delta(int n, const Rational& w_max, const Rational& eps, int l) {
  if (n < 3)
    throw PreconditionError("nibbling delta needs n >= 3");
  if (l < 1 || l > n - 1)
    throw PreconditionError("tail half-length must satisfy 1 <= l <= n - 1");
  if (!(eps > 0) || !(eps < w_max / (4 * (n - 2))))
    throw PreconditionError("need 0 < eps < w_max / (4 (n - 2))");
  return w_max * (n - l) / (2 * (n - 1)) - eps * (l - 1) / (n - 1);
}

TailDecomposition tail_decompose(int n, std::int64_t t) {
  if (n < 1 || t < 0)
    throw PreconditionError("tail decomposition needs n >= 1 and t >= 0");
  return {t / n, static_cast<int>(t % n)};
}

} // namespace bplab
