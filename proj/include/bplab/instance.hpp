#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bplab/exact.hpp"

namespace bplab {

/// Sentinel for "no partner": an Unresolved belief, a tie at the root of a
/// computation tree, or an uncovered node.
inline constexpr int kUnresolved = -1;

enum class EdgeClass {
  optimal,    // {alpha_i, beta_i} inside a cycle
  suboptimal, // {alpha_{i+1}, beta_i} inside a cycle
  heavy,      // {alpha_1, beta_n} inside a cycle
  pad,        // padding matching edge of a multi-cycle instance
  light,      // embedding filler, weight -2 w_max
  absent,     // not an edge of a cycle-only instance
};

std::string_view to_string(EdgeClass c);
EdgeClass edge_class_from_string(std::string_view name);

/// Construction record written by the generators.
struct InstanceMeta {
  std::string family; // "cycle" or "multicycle"
  int n = 0;
  Rational w_max;
  Rational eps;
  int c = 1;
  std::vector<int> primes; // cycle half-lengths, ascending
  bool embedded = true;
  Rational shift = 0; // total offset applied by shift_weights
  // Row-major n x n.
  std::vector<EdgeClass> edge_class;
  // Cycle index per node, -1 for pad nodes.
  std::vector<int> cycle_of_left;
  std::vector<int> cycle_of_right;

  EdgeClass classify(int i, int j) const { return edge_class[static_cast<std::size_t>(i * n + j)]; }
};

/// Weighted bipartite graph on n + n nodes. Weights are held as scaled
/// integers: the true weight of (i, j) is scaled(i, j) / scale(). An empty
/// support mask means the complete graph K_{n,n}.
class Instance {
public:
  Instance(int n, std::int64_t scale, std::vector<std::int64_t> scaled_weights,
           std::optional<InstanceMeta> meta = std::nullopt, std::vector<bool> support = {});

  /// Builds an instance over the least common denominator of the entries.
  static Instance from_rationals(const std::vector<std::vector<Rational>>& weights);

  int size() const { return n_; }
  std::int64_t scale() const { return scale_; }
  std::int64_t scaled(int i, int j) const { return weights_[index(i, j)]; }
  Rational weight(int i, int j) const { return to_rational(scaled(i, j), scale_); }
  bool has_edge(int i, int j) const { return support_.empty() || support_[index(i, j)]; }
  bool is_complete() const { return support_.empty(); }
  const std::vector<bool>& support() const { return support_; }
  const std::vector<std::int64_t>& scaled_weights() const { return weights_; }
  const std::optional<InstanceMeta>& meta() const { return meta_; }

  /// Largest |w| over present edges, in scaled units.
  std::int64_t max_abs_scaled() const;

  /// Converts an exact value into this instance's scaled units; throws when
  /// the value is not a multiple of 1/scale.
  std::int64_t to_scaled(const Rational& value) const;

private:
  std::size_t index(int i, int j) const;

  int n_;
  std::int64_t scale_;
  std::vector<std::int64_t> weights_;
  std::optional<InstanceMeta> meta_;
  std::vector<bool> support_;
};

/// A set of (left, right) pairs over an instance of side size n. Pairs are
/// kept sorted by left index.
struct Matching {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;

  bool perfect() const { return static_cast<int>(pairs.size()) == n; }
  bool contains(int i, int j) const;

  /// partner[i] is the right partner of left node i or kUnresolved.
  static Matching from_partners(const std::vector<int>& partner);
  std::vector<int> left_partners() const;
  std::vector<int> right_partners() const;

  friend bool operator==(const Matching&, const Matching&) = default;
};

/// Throws PreconditionError when an index is out of range or repeated.
void validate_matching(const Matching& m);

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

} // namespace bplab
