#pragma once

#include <optional>
#include <vector>

#include "bplab/instance.hpp"

namespace bplab {

struct CycleParams {
  int n = 3;
  Rational w_max = 1;
  Rational eps = 0;

  /// n >= 3 and 0 < eps < w_max / (4 (n - 2)).
  void validate() const;

  Rational optimal_weight() const { return w_max / 2; }
  Rational suboptimal_weight() const { return w_max / 2 - w_max / (2 * (n - 1)) - eps / (n - 1); }
  Rational heavy_weight() const { return w_max; }
  Rational light_weight() const { return -2 * w_max; }
};

/// The heavy-cycle instance on C_2n: E_opt = {alpha_i, beta_i},
/// E_sub = {alpha_{i+1}, beta_i} plus the heavy edge {alpha_1, beta_n}.
/// With embed the remaining K_{n,n} edges are light (-2 w_max); without it
/// they are absent.
Instance gen_cycle(const CycleParams& params, bool embed);

/// Optimal edges of a cycle instance, i.e. the identity matching.
Matching optimal_cycle_matching(int n);
/// Suboptimal edges of a cycle instance.
Matching suboptimal_cycle_matching(int n);

struct PrimeSelection {
  int n = 0;
  int c = 0;
  std::vector<int> primes; // ascending
  // The open interval (n / (2c), n / c).
  Rational lower;
  Rational upper;
};

/// Sieve of Eratosthenes; flags[k] is true iff k is prime.
std::vector<bool> prime_sieve(int limit);
int prime_count(int limit);

/// The c smallest primes strictly inside (n / (2c), n / c).
PrimeSelection select_primes(int n, int c);

/// floor(sqrt(n / log n) / 2), at least 1.
int default_cycle_count(int n);

struct PrimeCountBounds {
  // Outward-rounded rational enclosures of the real-valued bounds.
  Rational lower;
  Rational upper;
};

/// (n / log n)(1 + 1 / log n) <= pi(n) <= (n / log n)(1 + 1.2762 / log n),
/// valid for n >= 599. The logarithm is irrational, so the values are
/// rounded outward to multiples of 2^-20 with a margin well above the
/// long double error.
PrimeCountBounds pi_bounds(std::int64_t n);

/// K_{n,n} holding c node-disjoint heavy cycles of the selected prime
/// half-lengths, pad edges of weight w_max / 2 on the highest indices and
/// light edges everywhere else.
Instance gen_multicycle(int n, const Rational& w_max, const Rational& eps, std::optional<int> c = std::nullopt);

/// Unique maximum-weight matching of a generated instance: optimal cycle
/// edges plus pads.
Matching generated_optimum(const Instance& inst);

/// Adds delta to every edge weight, rescaling when delta is not a multiple
/// of 1/scale.
Instance shift_weights(const Instance& inst, const Rational& delta);

} // namespace bplab
