#include "bplab/approx.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "bplab/oracles.hpp"

namespace bplab {

ConflictGraph build_conflict_graph(const Instance& inst, const BeliefSnapshot& snapshot) {
  const int n = inst.size();
  if (static_cast<int>(snapshot.left.size()) != n || static_cast<int>(snapshot.right.size()) != n)
    throw PreconditionError("belief snapshot does not match instance size");
  const auto partial = partial_bp_matching(snapshot);

  ConflictGraph g;
  g.n = n;
  g.left_nodes = partial.uncovered_left;
  g.right_nodes = partial.uncovered_right;
  std::vector<char> free_left(static_cast<std::size_t>(n), 0), free_right(static_cast<std::size_t>(n), 0);
  for (int i : g.left_nodes)
    free_left[static_cast<std::size_t>(i)] = 1;
  for (int j : g.right_nodes)
    free_right[static_cast<std::size_t>(j)] = 1;

  // A mutual belief would be a pair, so each believed edge between two
  // uncovered nodes is single-sided and shows up exactly once.
  for (int i : g.left_nodes) {
    const int j = snapshot.left[static_cast<std::size_t>(i)];
    if (j != kUnresolved && free_right[static_cast<std::size_t>(j)])
      g.edges.push_back({i, j, inst.scaled(i, j), true});
  }
  for (int j : g.right_nodes) {
    const int i = snapshot.right[static_cast<std::size_t>(j)];
    if (i != kUnresolved && free_left[static_cast<std::size_t>(i)])
      g.edges.push_back({i, j, inst.scaled(i, j), false});
  }
  std::sort(g.edges.begin(), g.edges.end(),
            [](const ConflictEdge& a, const ConflictEdge& b) { return std::pair(a.left, a.right) < std::pair(b.left, b.right); });
  return g;
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t size) : parent(size) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x)
      x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b)
      return false;
    parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    return true;
  }
};

WeightedEdge as_weighted(const ConflictEdge& e) { return {e.left, e.right, e.scaled_weight}; }

Wide total(const std::vector<WeightedEdge>& edges) {
  Wide sum = 0;
  for (const auto& e : edges)
    sum = checked_add(sum, e.scaled_weight);
  return sum;
}

} // namespace

std::vector<ConflictComponent> conflict_components(const ConflictGraph& graph) {
  const int n = graph.n;
  DisjointSets sets(static_cast<std::size_t>(2 * n));
  for (const auto& e : graph.edges)
    sets.unite(e.left, n + e.right);

  std::map<int, ConflictComponent> by_root; // root is the smallest node id
  for (int i : graph.left_nodes)
    by_root[sets.find(i)].left_nodes.push_back(i);
  for (int j : graph.right_nodes)
    by_root[sets.find(n + j)].right_nodes.push_back(j);
  for (const auto& e : graph.edges)
    by_root[sets.find(e.left)].edges.push_back(e);

  std::vector<ConflictComponent> out;
  out.reserve(by_root.size());
  for (auto& [root, comp] : by_root)
    out.push_back(std::move(comp));
  return out;
}

std::vector<ConflictEdge> component_cycle(const ConflictComponent& component) {
  if (!component.has_cycle())
    return {};
  // Peel degree-one nodes; what remains is the cycle.
  std::map<std::pair<bool, int>, int> degree;
  for (const auto& e : component.edges) {
    ++degree[{false, e.left}];
    ++degree[{true, e.right}];
  }
  std::vector<char> alive(component.edges.size(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < component.edges.size(); ++k) {
      if (!alive[k])
        continue;
      const auto& e = component.edges[k];
      int& dl = degree[{false, e.left}];
      int& dr = degree[{true, e.right}];
      if (dl == 1 || dr == 1) {
        alive[k] = 0;
        --dl;
        --dr;
        changed = true;
      }
    }
  }
  std::vector<ConflictEdge> cycle;
  for (std::size_t k = 0; k < component.edges.size(); ++k)
    if (alive[k])
      cycle.push_back(component.edges[k]);
  return cycle;
}

std::vector<WeightedEdge> forest_mwm(std::span<const WeightedEdge> forest) {
  // Compact node ids: left nodes first, then right nodes.
  std::map<int, int> left_id, right_id;
  for (const auto& e : forest) {
    left_id.emplace(e.left, 0);
    right_id.emplace(e.right, 0);
  }
  int next = 0;
  for (auto& [k, v] : left_id)
    v = next++;
  for (auto& [k, v] : right_id)
    v = next++;
  const auto nodes = static_cast<std::size_t>(next);

  struct Arc {
    int to;
    std::size_t edge;
  };
  std::vector<std::vector<Arc>> adj(nodes);
  DisjointSets sets(nodes);
  for (std::size_t k = 0; k < forest.size(); ++k) {
    const int a = left_id[forest[k].left], b = right_id[forest[k].right];
    if (!sets.unite(a, b))
      throw PreconditionError("forest_mwm input contains a cycle");
    adj[static_cast<std::size_t>(a)].push_back({b, k});
    adj[static_cast<std::size_t>(b)].push_back({a, k});
  }

  // free_[u]: best below u with u unmatched; best_[u]: best below u.
  std::vector<Wide> free_(nodes, 0), best_(nodes, 0);
  std::vector<int> parent(nodes, -1);
  std::vector<std::size_t> parent_edge(nodes, 0);
  std::vector<std::size_t> order;
  std::vector<char> seen(nodes, 0);
  for (std::size_t r = 0; r < nodes; ++r) {
    if (seen[r])
      continue;
    seen[r] = 1;
    std::vector<std::size_t> stack{r};
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      order.push_back(u);
      for (const auto& arc : adj[u]) {
        const auto v = static_cast<std::size_t>(arc.to);
        if (!seen[v]) {
          seen[v] = 1;
          parent[v] = static_cast<int>(u);
          parent_edge[v] = arc.edge;
          stack.push_back(v);
        }
      }
    }
  }

  std::vector<int> take(nodes, -1); // child matched to u, if any
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto u = *it;
    Wide sum = 0, gain = 0;
    for (const auto& arc : adj[u]) {
      const auto v = static_cast<std::size_t>(arc.to);
      if (parent[v] != static_cast<int>(u))
        continue;
      sum = checked_add(sum, best_[v]);
      const Wide g = checked_sub(checked_add(free_[v], forest[arc.edge].scaled_weight), best_[v]);
      if (g > gain) {
        gain = g;
        take[u] = static_cast<int>(v);
      }
    }
    free_[u] = sum;
    best_[u] = checked_add(sum, gain);
  }

  std::vector<WeightedEdge> out;
  std::vector<char> used(nodes, 0);
  for (const auto u : order) {
    if (used[u] || take[u] < 0)
      continue;
    const auto v = static_cast<std::size_t>(take[u]);
    used[v] = 1;
    out.push_back(forest[parent_edge[v]]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CompletionResult complete(const Instance& inst, const BeliefSnapshot& snapshot) {
  const int n = inst.size();
  const auto graph = build_conflict_graph(inst, snapshot);

  CompletionResult result;
  result.partial = partial_bp_matching(snapshot).pairs;
  std::vector<int> partner = result.partial.left_partners();
  std::vector<char> right_used(static_cast<std::size_t>(n), 0);
  for (const auto& [i, j] : result.partial.pairs)
    right_used[static_cast<std::size_t>(j)] = 1;
  auto commit = [&](const WeightedEdge& e) {
    partner[static_cast<std::size_t>(e.left)] = e.right;
    right_used[static_cast<std::size_t>(e.right)] = 1;
  };

  for (auto& comp : conflict_components(graph)) {
    ComponentOutcome outcome;
    std::vector<WeightedEdge> edges;
    for (const auto& e : comp.edges)
      edges.push_back(as_weighted(e));

    if (comp.has_cycle()) {
      const auto cycle = component_cycle(comp);
      const auto e = as_weighted(cycle.front());
      std::vector<WeightedEdge> without_endpoints, without_edge;
      for (const auto& f : edges) {
        if (f == e)
          continue;
        without_edge.push_back(f);
        if (f.left != e.left && f.right != e.right)
          without_endpoints.push_back(f);
      }
      auto m_a = forest_mwm(without_endpoints);
      auto m_b = forest_mwm(without_edge);
      BranchRecord rec;
      rec.cycle_edge = e;
      rec.with_edge_scaled = checked_add(total(m_a), e.scaled_weight);
      rec.without_edge_scaled = total(m_b);
      rec.took_edge = rec.with_edge_scaled > rec.without_edge_scaled;
      if (rec.took_edge) {
        m_a.push_back(e);
        std::sort(m_a.begin(), m_a.end());
        outcome.committed = std::move(m_a);
      } else {
        outcome.committed = std::move(m_b);
      }
      outcome.branch = rec;
    } else if (comp.edges.size() > comp.node_count()) {
      throw std::logic_error("conflict component with more edges than nodes");
    } else {
      outcome.committed = forest_mwm(edges);
    }

    outcome.committed_scaled = total(outcome.committed);
    for (const auto& e : outcome.committed)
      commit(e);
    outcome.component = std::move(comp);
    result.components.push_back(std::move(outcome));
  }

  for (const auto& e : graph.edges) {
    if (partner[static_cast<std::size_t>(e.left)] == kUnresolved && !right_used[static_cast<std::size_t>(e.right)]) {
      result.leftover_pairs.push_back(as_weighted(e));
      commit(as_weighted(e));
    }
  }

  std::vector<int> free_left, free_right;
  for (int i = 0; i < n; ++i)
    if (partner[static_cast<std::size_t>(i)] == kUnresolved)
      free_left.push_back(i);
  for (int j = 0; j < n; ++j)
    if (!right_used[static_cast<std::size_t>(j)])
      free_right.push_back(j);
  if (free_left.size() != free_right.size())
    throw std::logic_error("unbalanced leftover sets");
  for (std::size_t k = 0; k < free_left.size(); ++k) {
    if (!inst.has_edge(free_left[k], free_right[k]))
      throw PreconditionError("greedy completion needs the edge (" + std::to_string(free_left[k]) + ", " +
                              std::to_string(free_right[k]) + "), which the instance lacks");
    partner[static_cast<std::size_t>(free_left[k])] = free_right[k];
    result.greedy_pairs.emplace_back(free_left[k], free_right[k]);
  }

  result.matching = Matching::from_partners(partner);
  return result;
}

Rational approximation_ratio(const Instance& inst, const Matching& completion, const Rational& mwm_weight) {
  if (!completion.perfect())
    throw PreconditionError("approximation ratio needs a perfect matching");
  if (!(mwm_weight > 0))
    throw PreconditionError("approximation ratio needs a positive optimum; shift the weights first");
  Rational r = matching_weight(inst, completion) / mwm_weight;
  r.canonicalize();
  return r;
}

} // namespace bplab
