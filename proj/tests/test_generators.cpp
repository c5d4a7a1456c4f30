#include "doctest.h"

#include "bplab/generators.hpp"
#include "bplab/oracles.hpp"

using namespace bplab;

namespace {

bool trial_division_prime(int k) {
  if (k < 2)
    return false;
  for (int d = 2; d * d <= k; ++d)
    if (k % d == 0)
      return false;
  return true;
}

} // namespace

TEST_CASE("cycle weights") {
  const CycleParams p{3, 8, Rational(1, 2)};
  const auto inst = gen_cycle(p, true);
  CHECK(inst.weight(0, 0) == 4);
  CHECK(inst.weight(0, 2) == 8);
  CHECK(inst.weight(1, 0) == Rational(7, 4));
  CHECK(inst.weight(0, 1) == -16);
  CHECK(matching_weight(inst, optimal_cycle_matching(3)) == 12);
  CHECK(matching_weight(inst, suboptimal_cycle_matching(3)) == Rational(23, 2));
  CHECK(inst.meta()->classify(2, 1) == EdgeClass::suboptimal);
  CHECK(inst.meta()->classify(1, 2) == EdgeClass::light);
  CHECK(mwm_hungarian(inst).matching == optimal_cycle_matching(3));
}

TEST_CASE("cycle parameter validation") {
  CHECK_THROWS_AS(gen_cycle(CycleParams{2, 8, Rational(1, 2)}, true), PreconditionError);
  CHECK_THROWS_AS(gen_cycle(CycleParams{3, 8, 0}, true), PreconditionError);
  CHECK_THROWS_AS(gen_cycle(CycleParams{3, 8, 2}, true), PreconditionError); // eps = w_max / 4 (n - 2)
  CHECK_THROWS_AS(gen_cycle(CycleParams{3, -1, Rational(1, 2)}, true), PreconditionError);
  CHECK_NOTHROW(gen_cycle(CycleParams{3, 8, Rational(199, 100)}, true));
}

TEST_CASE("sieve matches trial division") {
  const auto flags = prime_sieve(5000);
  for (int k = 0; k <= 5000; ++k)
    CHECK(flags[static_cast<std::size_t>(k)] == trial_division_prime(k));
  CHECK(prime_count(1) == 0);
  CHECK(prime_count(2) == 1);
  CHECK(prime_count(100) == 25);
  CHECK(prime_sieve(1).size() == 2);
}

TEST_CASE("prime selection") {
  const auto sel = select_primes(16, 2);
  CHECK(sel.primes == std::vector<int>{5, 7});
  CHECK(sel.lower == 4);
  CHECK(sel.upper == 8);
  // Open interval: 14 / 2 = 7 is excluded, leaving only 5.
  CHECK_THROWS_AS(select_primes(14, 2), PreconditionError);
  CHECK(select_primes(14, 1).primes == std::vector<int>{11});
  CHECK_THROWS_AS(select_primes(10, 0), PreconditionError);
  for (int n = 20; n <= 400; n += 7)
    for (int c = 1; c <= 3; ++c) {
      std::vector<int> ref;
      for (int p = 2; p < n && static_cast<int>(ref.size()) < c; ++p)
        if (trial_division_prime(p) && 2 * c * p > n && c * p < n)
          ref.push_back(p);
      if (static_cast<int>(ref.size()) == c)
        CHECK(select_primes(n, c).primes == ref);
      else
        CHECK_THROWS_AS(select_primes(n, c), PreconditionError);
    }
}

TEST_CASE("default cycle count") {
  CHECK(default_cycle_count(16) == 1);
  CHECK(default_cycle_count(1000) == 6);
  CHECK_THROWS_AS(default_cycle_count(2), PreconditionError);
}

TEST_CASE("prime counting bounds enclose pi(n)") {
  for (std::int64_t n : {599, 600, 1000, 5000, 20000, 100000}) {
    const auto b = pi_bounds(n);
    const Rational pi = prime_count(static_cast<int>(n));
    CHECK(b.lower <= pi);
    CHECK(pi <= b.upper);
  }
  CHECK_THROWS_AS(pi_bounds(598), PreconditionError);
}

TEST_CASE("multicycle layout") {
  const auto inst = gen_multicycle(16, 8, Rational(1, 100), 2);
  const auto& meta = *inst.meta();
  CHECK(meta.primes == std::vector<int>{5, 7});
  CHECK(meta.cycle_of_left[4] == 0);
  CHECK(meta.cycle_of_left[5] == 1);
  CHECK(meta.cycle_of_left[12] == -1);
  CHECK(meta.classify(12, 12) == EdgeClass::pad);
  CHECK(meta.classify(5, 11) == EdgeClass::heavy);
  CHECK(meta.classify(0, 5) == EdgeClass::light);
  CHECK(inst.weight(13, 13) == 4);
  CHECK(inst.weight(0, 4) == 8);
  CHECK(generated_optimum(inst) == optimal_cycle_matching(16));
  CHECK(mwm_hungarian(inst).matching == generated_optimum(inst));
  CHECK(mwm_hungarian(inst).weight == 64);
  // eps must also satisfy the range of the largest cycle.
  CHECK_THROWS_AS(gen_multicycle(16, 8, Rational(2, 5), 2), PreconditionError);
}

TEST_CASE("shift_weights") {
  const auto inst = gen_cycle(CycleParams{3, 8, Rational(1, 2)}, true);
  const auto shifted = shift_weights(inst, Rational(1, 3));
  CHECK(shifted.weight(0, 0) == Rational(13, 3));
  CHECK(shifted.weight(1, 0) == Rational(7, 4) + Rational(1, 3));
  CHECK(shifted.meta()->shift == Rational(1, 3));
  CHECK(mwm_hungarian(shifted).matching == mwm_hungarian(inst).matching);
}

TEST_CASE("multicycle at n = 30") {
  CHECK(select_primes(30, 2).primes == std::vector<int>{11, 13});
  const auto inst = gen_multicycle(30, 8, Rational(1, 50), 2);
  const auto& meta = *inst.meta();
  int covered = 0;
  for (int i = 0; i < 30; ++i)
    covered += meta.cycle_of_left[static_cast<std::size_t>(i)] >= 0;
  CHECK(covered == 24);
  CHECK(30 - covered == 6); // pad pairs
  CHECK(mwm_hungarian(inst).weight == 30 * 8 / 2);
  // Inside each block the weights follow the formula with that cycle's own length.
  int offset = 0;
  for (int p : meta.primes) {
    const auto alone = gen_cycle(CycleParams{p, 8, Rational(1, 50)}, true);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        CHECK(inst.weight(offset + i, offset + j) == alone.weight(i, j));
    offset += p;
  }
}

TEST_CASE("eps near its upper limit keeps suboptimal weights non-negative") {
  for (int n = 3; n <= 9; ++n) {
    const Rational limit = Rational(8, 4 * (n - 2));
    const Rational eps = limit - Rational(1, 1000);
    const auto inst = gen_cycle(CycleParams{n, 8, eps}, false);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (inst.meta()->classify(i, j) == EdgeClass::suboptimal)
          CHECK(inst.weight(i, j) >= 0);
  }
}

TEST_CASE("shift_weights extremes") {
  const auto inst = gen_cycle(CycleParams{4, 8, Rational(1, 2)}, true);
  const auto same = shift_weights(inst, 0);
  CHECK(same.scaled_weights() == inst.scaled_weights());
  CHECK(same.scale() == inst.scale());
  const auto lifted = shift_weights(inst, 16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(lifted.weight(i, j) >= 0);
  CHECK(mwm_hungarian(lifted).matching == optimal_cycle_matching(4));
}

TEST_CASE("prime counting bounds at fixed points") {
  const auto low = pi_bounds(599);
  CHECK(low.lower <= 109);
  CHECK(109 <= low.upper);
  const auto mid = pi_bounds(10000);
  CHECK(mid.lower <= 1229);
  CHECK(1229 <= mid.upper);
  CHECK(prime_count(599) == 109);
  CHECK(prime_count(10000) == 1229);
}
