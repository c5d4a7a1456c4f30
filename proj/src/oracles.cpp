#include "bplab/oracles.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>

namespace bplab {

namespace {

using EdgeMask = std::vector<bool>; // row-major, true = usable

bool usable(const Instance& inst, const EdgeMask& mask, int i, int j) {
  return inst.has_edge(i, j) && (mask.empty() || mask[static_cast<std::size_t>(i * inst.size() + j)]);
}

// Lexicographically smallest perfect matching in the tight subgraph, given
// any perfect matching of it. Rows are fixed in ascending order; switching
// row i to a smaller column j needs an alternating path among the rows that
// are not fixed yet.
class TightLexMin {
public:
  TightLexMin(int n, std::function<bool(int, int)> tight, std::vector<int> row_match)
      : n_(n), tight_(std::move(tight)), row_(std::move(row_match)), col_(static_cast<std::size_t>(n)) {
    for (int i = 0; i < n_; ++i)
      col_[static_cast<std::size_t>(row_[static_cast<std::size_t>(i)])] = i;
  }

  std::vector<int> run() {
    fixed_col_.assign(static_cast<std::size_t>(n_), false);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        if (fixed_col_[static_cast<std::size_t>(j)] || !tight_(i, j))
          continue;
        if (j == row_[static_cast<std::size_t>(i)] || try_switch(i, j))
          break;
      }
      fixed_col_[static_cast<std::size_t>(row_[static_cast<std::size_t>(i)])] = true;
      first_free_row_ = i + 1;
    }
    return row_;
  }

private:
  bool try_switch(int i, int j) {
    const auto saved_row = row_;
    const auto saved_col = col_;
    const int freed_col = row_[static_cast<std::size_t>(i)];
    const int orphan = col_[static_cast<std::size_t>(j)];
    row_[static_cast<std::size_t>(i)] = j;
    col_[static_cast<std::size_t>(j)] = i;
    col_[static_cast<std::size_t>(freed_col)] = kUnresolved;
    row_[static_cast<std::size_t>(orphan)] = kUnresolved;
    visited_.assign(static_cast<std::size_t>(n_), false);
    first_free_row_ = i + 1;
    if (augment(orphan))
      return true;
    row_ = saved_row;
    col_ = saved_col;
    return false;
  }

  bool augment(int r) {
    for (int j = 0; j < n_; ++j) {
      if (fixed_col_[static_cast<std::size_t>(j)] || visited_[static_cast<std::size_t>(j)] || !tight_(r, j))
        continue;
      const int owner = col_[static_cast<std::size_t>(j)];
      if (owner != kUnresolved && owner < first_free_row_)
        continue;
      visited_[static_cast<std::size_t>(j)] = true;
      if (owner == kUnresolved || augment(owner)) {
        row_[static_cast<std::size_t>(r)] = j;
        col_[static_cast<std::size_t>(j)] = r;
        return true;
      }
    }
    return false;
  }

  int n_;
  std::function<bool(int, int)> tight_;
  std::vector<int> row_;
  std::vector<int> col_;
  std::vector<bool> fixed_col_;
  std::vector<bool> visited_;
  int first_free_row_ = 0;
};

// Max-weight perfect matching over usable edges, or nullopt when none exists.
std::optional<MwmResult> solve_assignment(const Instance& inst, const EdgeMask& mask) {
  const int n = inst.size();
  const Wide max_abs = inst.max_abs_scaled();
  // Any perfect matching touching a forbidden cell costs more than every
  // matching that avoids them.
  const Wide forbidden_cost = checked_mul(2 * static_cast<Wide>(n) + 1, max_abs + 1);
  const Wide inf = std::numeric_limits<Wide>::max() / 4;

  auto cost = [&](int i, int j) -> Wide {
    return usable(inst, mask, i, j) ? -static_cast<Wide>(inst.scaled(i, j)) : forbidden_cost;
  };

  const auto sz = static_cast<std::size_t>(n) + 1;
  std::vector<Wide> u(sz, 0), v(sz, 0), minv(sz);
  std::vector<int> p(sz, 0), way(sz, 0);
  std::vector<bool> used(sz);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = p[static_cast<std::size_t>(j0)];
      Wide delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)])
          continue;
        const Wide cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_match(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j)
    row_match[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  for (int i = 0; i < n; ++i)
    if (!usable(inst, mask, i, row_match[static_cast<std::size_t>(i)]))
      return std::nullopt;

  // Every optimal matching lies on edges with zero reduced cost.
  auto tight = [&](int i, int j) {
    return usable(inst, mask, i, j) &&
           cost(i, j) - u[static_cast<std::size_t>(i) + 1] - v[static_cast<std::size_t>(j) + 1] == 0;
  };
  row_match = TightLexMin(n, tight, std::move(row_match)).run();

  MwmResult out;
  out.matching = Matching::from_partners(row_match);
  out.scaled_weight = matching_weight_scaled(inst, out.matching);
  out.weight = to_rational(out.scaled_weight, inst.scale());
  return out;
}

struct BruteforceScan {
  std::vector<int> best_perm;
  std::optional<Wide> best;
  std::optional<Wide> second;
};

BruteforceScan scan_permutations(const Instance& inst) {
  const int n = inst.size();
  if (n > kBruteforceMaxN)
    throw PreconditionError("brute-force oracle limited to n <= " + std::to_string(kBruteforceMaxN));
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  BruteforceScan scan;
  do {
    Wide total = 0;
    bool feasible = true;
    for (int i = 0; i < n && feasible; ++i) {
      const int j = perm[static_cast<std::size_t>(i)];
      feasible = inst.has_edge(i, j);
      total += inst.scaled(i, j);
    }
    if (!feasible)
      continue;
    if (!scan.best || total > *scan.best) {
      scan.second = scan.best;
      scan.best = total;
      scan.best_perm = perm;
    } else if (!scan.second || total > *scan.second) {
      scan.second = total;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return scan;
}

} // namespace

Wide matching_weight_scaled(const Instance& inst, const Matching& m) {
  if (m.n != inst.size())
    throw PreconditionError("matching and instance sizes differ");
  validate_matching(m);
  Wide total = 0;
  for (const auto& [i, j] : m.pairs) {
    if (!inst.has_edge(i, j))
      throw PreconditionError("matching uses a non-edge");
    total = checked_add(total, inst.scaled(i, j));
  }
  return total;
}

Rational matching_weight(const Instance& inst, const Matching& m) {
  return to_rational(matching_weight_scaled(inst, m), inst.scale());
}

MwmResult mwm_bruteforce(const Instance& inst) {
  const auto scan = scan_permutations(inst);
  if (!scan.best)
    throw PreconditionError("instance has no perfect matching");
  MwmResult out;
  out.matching = Matching::from_partners(scan.best_perm);
  out.scaled_weight = *scan.best;
  out.weight = to_rational(*scan.best, inst.scale());
  return out;
}

MwmResult mwm_hungarian(const Instance& inst) {
  auto out = solve_assignment(inst, {});
  if (!out)
    throw PreconditionError("instance has no perfect matching");
  return *out;
}

Wide uniqueness_gap_scaled(const Instance& inst) {
  const int n = inst.size();
  if (n < 2)
    throw PreconditionError("uniqueness gap undefined for n = 1 (only one perfect matching)");
  if (n <= kBruteforceMaxN) {
    const auto scan = scan_permutations(inst);
    if (!scan.best || !scan.second)
      throw PreconditionError("instance has fewer than two perfect matchings");
    return *scan.best - *scan.second;
  }
  const auto best = mwm_hungarian(inst);
  std::optional<Wide> second;
  EdgeMask mask(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), true);
  for (const auto& [i, j] : best.matching.pairs) {
    const auto cell = static_cast<std::size_t>(i * n + j);
    mask[cell] = false;
    if (auto alt = solve_assignment(inst, mask); alt && (!second || alt->scaled_weight > *second))
      second = alt->scaled_weight;
    mask[cell] = true;
  }
  if (!second)
    throw PreconditionError("instance has fewer than two perfect matchings");
  return best.scaled_weight - *second;
}

Rational uniqueness_gap(const Instance& inst) {
  return to_rational(uniqueness_gap_scaled(inst), inst.scale());
}

} // namespace bplab
