#pragma once

#include "bplab/instance.hpp"

namespace bplab {

struct MwmResult {
  Matching matching;
  Wide scaled_weight = 0;
  Rational weight;
};

/// Exact W(M). Every pair must be an edge of the instance.
Rational matching_weight(const Instance& inst, const Matching& m);
Wide matching_weight_scaled(const Instance& inst, const Matching& m);

inline constexpr int kBruteforceMaxN = 10;

/// Enumerates all n! perfect matchings; the lexicographically smallest
/// optimal permutation wins ties.
MwmResult mwm_bruteforce(const Instance& inst);

/// Hungarian method over exact scaled integers. Among optimal matchings the
/// lexicographically smallest one is returned, so results agree with
/// mwm_bruteforce even in the presence of ties.
MwmResult mwm_hungarian(const Instance& inst);

/// W(best) - W(second best perfect matching); zero when the MWM is not
/// unique. Brute force for n <= 10, forbid-one-edge re-solves above.
Rational uniqueness_gap(const Instance& inst);
Wide uniqueness_gap_scaled(const Instance& inst);

} // namespace bplab
