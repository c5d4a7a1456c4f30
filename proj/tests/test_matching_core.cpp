#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "bplab/generators.hpp"
#include "bplab/oracles.hpp"
#include "support.hpp"

using namespace bplab;

TEST_CASE("parse_rational accepts P/Q forms and rejects the rest") {
  CHECK(parse_rational("3/5") == Rational(3, 5));
  CHECK(parse_rational("-3/5") == Rational(-3, 5));
  CHECK(parse_rational("7") == 7);
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(parse_rational("-8/4")) == "-2");
  for (const char* bad : {"1/0", "0.5", "abc", "1/2x", "", "/3", "3/", "1e3", " 1/2"})
    CHECK_THROWS_AS(parse_rational(bad), PreconditionError);
}

TEST_CASE("checked arithmetic reports overflow") {
  const Wide big = (Wide{1} << 126);
  CHECK_THROWS_AS(checked_add(big, big), MagnitudeOverflow);
  CHECK_THROWS_AS(checked_mul(big, 4), MagnitudeOverflow);
  CHECK(checked_sub(5, 7) == -2);
  CHECK(to_string(Wide{-1234567890123456789}) == "-1234567890123456789");
  CHECK_THROWS_AS(to_int64(Rational(1, 2)), MagnitudeOverflow);
}

TEST_CASE("instance JSON round trip keeps weights, support and meta") {
  const auto inst = gen_cycle(CycleParams{4, 8, Rational(1, 3)}, false);
  const auto back = instance_from_json(instance_to_json(inst));
  CHECK(back.size() == 4);
  CHECK(back.scale() == inst.scale());
  CHECK(back.scaled_weights() == inst.scaled_weights());
  CHECK(back.support() == inst.support());
  REQUIRE(back.meta());
  CHECK(back.meta()->eps == Rational(1, 3));
  CHECK(back.meta()->classify(0, 3) == EdgeClass::heavy);
  CHECK_FALSE(back.has_edge(0, 2));
  CHECK(instance_to_json(back) == instance_to_json(inst));

  CHECK_THROWS_AS(instance_from_json("{\"n\": 2}"), PreconditionError);
  CHECK_THROWS_AS(instance_from_json("not json"), PreconditionError);
}

TEST_CASE("from_rationals picks the common denominator") {
  const auto inst = Instance::from_rationals({{Rational(1, 2), Rational(1, 3)}, {Rational(-1, 6), 2}});
  CHECK(inst.scale() == 6);
  CHECK(inst.scaled(0, 0) == 3);
  CHECK(inst.weight(1, 0) == Rational(-1, 6));
}

TEST_CASE("matching_weight rejects non-edges and repeated nodes") {
  const auto inst = gen_cycle(CycleParams{3, 8, Rational(1, 2)}, false);
  CHECK(matching_weight(inst, optimal_cycle_matching(3)) == 12);
  Matching bad{3, {{0, 1}, {1, 0}, {2, 2}}};
  CHECK_THROWS_AS(matching_weight(inst, bad), PreconditionError);
  Matching rep{3, {{0, 0}, {1, 0}, {2, 2}}};
  CHECK_THROWS_AS(validate_matching(rep), PreconditionError);
}

TEST_CASE("Hungarian method agrees with brute force, ties included") {
  std::mt19937_64 rng(7);
  int cases = 0;
  for (int round = 0; round < 520; ++round) {
    const int n = 1 + round % 8;
    // Narrow weight ranges make ties common.
    const int range = round % 3 == 0 ? 2 : 20;
    const auto inst = testing::random_instance(rng, n, -range, range);
    const auto brute = mwm_bruteforce(inst);
    const auto hung = mwm_hungarian(inst);
    CHECK(brute.scaled_weight == hung.scaled_weight);
    CHECK(brute.matching == hung.matching);
    ++cases;
  }
  CHECK(cases >= 500);
}

TEST_CASE("Hungarian method on sparse supports") {
  const auto cyc = gen_cycle(CycleParams{6, 8, Rational(1, 5)}, false);
  CHECK(mwm_hungarian(cyc).matching == optimal_cycle_matching(6));
  CHECK(mwm_bruteforce(cyc).matching == optimal_cycle_matching(6));

  // Only one column reachable from two rows: no perfect matching.
  std::vector<bool> support{true, false, true, false};
  Instance none(2, 1, {1, 1, 1, 1}, std::nullopt, support);
  CHECK_THROWS_AS(mwm_hungarian(none), PreconditionError);
  CHECK_THROWS_AS(mwm_bruteforce(none), PreconditionError);
}

TEST_CASE("uniqueness gap") {
  SUBCASE("cycle instances have gap eps") {
    for (int n : {3, 5, 11, 13}) {
      const auto eps = Rational(1, 7);
      CHECK(uniqueness_gap(gen_cycle(CycleParams{n, 8, eps}, true)) == eps);
      CHECK(uniqueness_gap(gen_cycle(CycleParams{n, 8, eps}, false)) == eps);
    }
  }
  SUBCASE("ties give zero") {
    Instance flat(3, 1, std::vector<std::int64_t>(9, 4));
    CHECK(uniqueness_gap(flat) == 0);
  }
  SUBCASE("brute force and re-solving agree above the threshold") {
    // n = 11 goes through the forbid-one-edge path; check it against an
    // instance whose second best is known: identity 10 each, one swap -1.
    const int n = 11;
    std::vector<std::int64_t> w(static_cast<std::size_t>(n * n), 0);
    for (int i = 0; i < n; ++i)
      w[static_cast<std::size_t>(i * n + i)] = 10;
    w[static_cast<std::size_t>(0 * n + 1)] = 10;
    w[static_cast<std::size_t>(1 * n + 0)] = 9;
    CHECK(uniqueness_gap_scaled(Instance(n, 1, w)) == 1);
  }
  CHECK_THROWS_AS(uniqueness_gap(Instance(1, 1, {3})), PreconditionError);
}

TEST_CASE("brute force refuses large n") {
  Instance big(kBruteforceMaxN + 1, 1, std::vector<std::int64_t>((kBruteforceMaxN + 1) * (kBruteforceMaxN + 1), 0));
  CHECK_THROWS_AS(mwm_bruteforce(big), PreconditionError);
  CHECK(mwm_hungarian(big).scaled_weight == 0);
}

TEST_CASE("small fixed instances") {
  Instance one(1, 1, {5});
  CHECK(matching_weight(one, Matching{1, {{0, 0}}}) == 5);
  CHECK(mwm_hungarian(one).matching == Matching{1, {{0, 0}}});
  Instance diag(2, 1, {1, 0, 0, 1});
  const auto brute = mwm_bruteforce(diag);
  CHECK(brute.matching == optimal_cycle_matching(2));
  CHECK(brute.weight == 2);
  CHECK(uniqueness_gap(diag) == 2);
}

TEST_CASE("Hungarian method on rational matrices") {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 6);
  for (int round = 0; round < 100; ++round) {
    std::vector<std::vector<Rational>> w(6, std::vector<Rational>(6));
    for (auto& row : w)
      for (auto& x : row) {
        x = Rational(num(rng), den(rng));
        x.canonicalize();
      }
    const auto inst = Instance::from_rationals(w);
    CHECK(mwm_hungarian(inst).weight == mwm_bruteforce(inst).weight);
  }
}

TEST_CASE("matching weight is invariant under relabelling both sides") {
  std::mt19937_64 rng(47);
  for (int round = 0; round < 50; ++round) {
    const int n = 5;
    const auto inst = testing::random_instance(rng, n, -9, 9);
    std::vector<int> pl(n), pr(n), partner(n);
    std::iota(pl.begin(), pl.end(), 0);
    std::iota(pr.begin(), pr.end(), 0);
    std::iota(partner.begin(), partner.end(), 0);
    std::shuffle(pl.begin(), pl.end(), rng);
    std::shuffle(pr.begin(), pr.end(), rng);
    std::shuffle(partner.begin(), partner.end(), rng);
    std::vector<std::int64_t> w(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        w[static_cast<std::size_t>(pl[i] * n + pr[j])] = inst.scaled(i, j);
    const Instance moved(n, 1, w);
    std::vector<int> moved_partner(n);
    for (int i = 0; i < n; ++i)
      moved_partner[static_cast<std::size_t>(pl[i])] = pr[static_cast<std::size_t>(partner[i])];
    CHECK(matching_weight(inst, Matching::from_partners(partner)) == matching_weight(moved, Matching::from_partners(moved_partner)));
    CHECK(mwm_hungarian(inst).weight == mwm_hungarian(moved).weight);
  }
}

TEST_CASE("multicycle optimum and gap") {
  // n = 11, c = 2 selects primes {3, 5}; n > 10 takes the re-solving path.
  const auto eps = Rational(1, 7);
  const auto inst = gen_multicycle(11, 8, eps, 2);
  CHECK(inst.meta()->primes == std::vector<int>{3, 5});
  CHECK(uniqueness_gap(inst) == eps);
  const auto opt = mwm_hungarian(inst);
  CHECK(opt.matching == generated_optimum(inst));
  CHECK(opt.weight == 11 * 4);
  // Per-cycle optimality against brute force on each cycle block alone.
  int offset = 0;
  for (int p : inst.meta()->primes) {
    std::vector<std::int64_t> block;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        block.push_back(inst.scaled(offset + i, offset + j));
    CHECK(mwm_bruteforce(Instance(p, inst.scale(), block)).matching == optimal_cycle_matching(p));
    offset += p;
  }
}

TEST_CASE("uniqueness gap is never negative") {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 100; ++round) {
    const int n = 2 + round % 10;
    CHECK(uniqueness_gap(testing::random_instance(rng, n, -3, 3)) >= 0);
  }
}
