#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bplab/instance.hpp"

namespace bplab {

/// Both directed message tables at one iteration, in the instance's scaled
/// units. to_right(i, j) is the message alpha_i -> beta_j, to_left(i, j) the
/// message beta_j -> alpha_i. Entries for non-edges are unused.
struct MessageState {
  int n = 0;
  std::int64_t iteration = 0;
  std::vector<Wide> to_right;
  std::vector<Wide> to_left;

  Wide& right(int i, int j) { return to_right[cell(i, j)]; }
  Wide right(int i, int j) const { return to_right[cell(i, j)]; }
  Wide& left(int i, int j) { return to_left[cell(i, j)]; }
  Wide left(int i, int j) const { return to_left[cell(i, j)]; }

private:
  std::size_t cell(int i, int j) const { return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j); }
};

struct BeliefSnapshot {
  std::int64_t iteration = 0;
  std::vector<int> left;  // partner of alpha_i, or kUnresolved
  std::vector<int> right; // partner of beta_j, or kUnresolved

  friend bool operator==(const BeliefSnapshot&, const BeliefSnapshot&) = default;
};

struct PartialBpMatching {
  Matching pairs;
  std::vector<int> uncovered_left;
  std::vector<int> uncovered_right;
};

struct StepOptions {
  // Subtract one common constant from both tables after each round. This
  // is the only shift that leaves every node's arg-max unchanged.
  bool recenter = true;
};

MessageState init_messages(const Instance& inst);

/// One synchronous round:
///   m_{a_i -> b_j} = w_ij - max_{l != j} m_{b_l -> a_i}
///   m_{b_j -> a_i} = w_ij - max_{k != i} m_{a_k -> b_j}
/// with the max over an empty neighbourhood taken as 0.
MessageState step(const Instance& inst, const MessageState& state, StepOptions options = {});

/// Unique arg-max of the incoming messages of every node. This is the root
/// edge of a maximum-weight T-matching of the depth-t computation tree.
BeliefSnapshot beliefs(const Instance& inst, const MessageState& state);

PartialBpMatching partial_bp_matching(const BeliefSnapshot& snapshot);

/// True when every node believes in its partner in `reference`.
bool encodes(const BeliefSnapshot& snapshot, const Matching& reference);

/// Snapshots for t = 1..horizon.
std::vector<BeliefSnapshot> run_to_horizon(const Instance& inst, std::int64_t horizon, StepOptions options = {});

/// Streaming variant: the callback sees each snapshot once and nothing is
/// retained. Return false from the callback to stop early.
void run_streaming(const Instance& inst, std::int64_t horizon,
                   const std::function<bool(const BeliefSnapshot&)>& on_iteration, StepOptions options = {});

struct TraceSummary {
  std::int64_t t = 0;
  int pairs = 0;
  int unresolved = 0;
  bool is_reference = false;
};

std::vector<TraceSummary> run_summaries(const Instance& inst, std::int64_t horizon, const Matching& reference);

/// Smallest T such that the beliefs encode `reference` for all
/// T <= t <= horizon. Throws HorizonExhausted when the beliefs are not
/// correct at the horizon itself.
std::int64_t convergence_time(const Instance& inst, const Matching& reference, std::int64_t horizon);

/// ceil(2 n w_max / eps) from generator metadata (the run length after which
/// BP has converged on instances with a unique MWM).
std::int64_t certified_horizon(const InstanceMeta& meta);

} // namespace bplab
