#pragma once

// Independent reference computations shared by the unit and acceptance
// tests. Nothing here calls into the code under test except for plain data
// types.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "bplab/approx.hpp"
#include "bplab/instance.hpp"

namespace bplab::testing {

inline Instance random_instance(std::mt19937_64& rng, int n, int lo, int hi) {
  std::uniform_int_distribution<std::int64_t> w(lo, hi);
  std::vector<std::int64_t> weights(static_cast<std::size_t>(n * n));
  for (auto& x : weights)
    x = w(rng);
  return Instance(n, 1, std::move(weights));
}

/// Best total over all subsets of `edges` that form a matching. Returns the
/// weight; empty subset allowed.
inline Wide best_submatching(const std::vector<WeightedEdge>& edges) {
  const std::size_t m = edges.size();
  Wide best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<int> ls, rs;
    Wide w = 0;
    bool ok = true;
    for (std::size_t k = 0; k < m && ok; ++k) {
      if (!(mask >> k & 1))
        continue;
      const auto& e = edges[k];
      if (std::find(ls.begin(), ls.end(), e.left) != ls.end() || std::find(rs.begin(), rs.end(), e.right) != rs.end())
        ok = false;
      ls.push_back(e.left);
      rs.push_back(e.right);
      w += e.scaled_weight;
    }
    if (ok)
      best = std::max(best, w);
  }
  return best;
}

/// Random forest on bipartite node sets, built by attaching each new edge
/// to at most one existing component.
inline std::vector<WeightedEdge> random_forest(std::mt19937_64& rng, int max_edges) {
  std::uniform_int_distribution<int> count(0, max_edges);
  std::uniform_int_distribution<std::int64_t> weight(-9, 9);
  const int m = count(rng);
  std::vector<WeightedEdge> out;
  std::vector<int> comp_left, comp_right; // component label per node
  auto fresh = [](std::vector<int>& labels, int label) {
    labels.push_back(label);
    return static_cast<int>(labels.size()) - 1;
  };
  int next_label = 0;
  for (int k = 0; k < m; ++k) {
    std::uniform_int_distribution<int> coin(0, 2);
    int l, r;
    const int mode = coin(rng);
    if (mode == 0 || comp_left.empty() || comp_right.empty()) {
      l = fresh(comp_left, next_label);
      r = fresh(comp_right, next_label);
      ++next_label;
    } else if (mode == 1) {
      l = std::uniform_int_distribution<int>(0, static_cast<int>(comp_left.size()) - 1)(rng);
      r = fresh(comp_right, comp_left[static_cast<std::size_t>(l)]);
    } else {
      r = std::uniform_int_distribution<int>(0, static_cast<int>(comp_right.size()) - 1)(rng);
      l = fresh(comp_left, comp_right[static_cast<std::size_t>(r)]);
    }
    out.push_back({l, r, weight(rng)});
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

inline BeliefSnapshot random_snapshot(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> pick(-1, n - 1);
  BeliefSnapshot b;
  b.iteration = 1;
  for (int k = 0; k < n; ++k) {
    b.left.push_back(pick(rng));
    b.right.push_back(pick(rng));
  }
  return b;
}

} // namespace bplab::testing
