#include "bplab/bp.hpp"

#include <algorithm>
#include <limits>

namespace bplab {

namespace {

constexpr Wide kNone = std::numeric_limits<Wide>::min();

// Largest and second-largest (as a multiset) incoming value of one node,
// plus the first index attaining the largest.
struct TopTwo {
  Wide first = kNone;
  Wide second = kNone;
  int arg = kUnresolved;
  int degree = 0;

  void push(Wide value, int index) {
    ++degree;
    if (value > first) {
      second = first;
      first = value;
      arg = index;
    } else if (value > second) {
      second = value;
    }
  }

  // max over the neighbourhood without `index`; 0 when that is empty.
  Wide max_excluding(int index) const {
    if (degree <= 1)
      return 0;
    return index == arg ? second : first;
  }
};

int unique_argmax(const std::vector<std::pair<Wide, int>>& values) {
  int arg = kUnresolved;
  Wide best = kNone;
  bool tie = false;
  for (const auto& [value, index] : values) {
    if (value > best) {
      best = value;
      arg = index;
      tie = false;
    } else if (value == best) {
      tie = true;
    }
  }
  return tie ? kUnresolved : arg;
}

} // namespace

MessageState init_messages(const Instance& inst) {
  MessageState s;
  s.n = inst.size();
  const auto cells = static_cast<std::size_t>(s.n) * static_cast<std::size_t>(s.n);
  s.to_right.assign(cells, 0);
  s.to_left.assign(cells, 0);
  return s;
}

MessageState step(const Instance& inst, const MessageState& state, StepOptions options) {
  const int n = inst.size();
  if (state.n != n)
    throw PreconditionError("message state does not belong to this instance");

  MessageState next;
  next.n = n;
  next.iteration = state.iteration + 1;
  next.to_right.assign(state.to_right.size(), 0);
  next.to_left.assign(state.to_left.size(), 0);

  for (int i = 0; i < n; ++i) {
    TopTwo in;
    for (int l = 0; l < n; ++l)
      if (inst.has_edge(i, l))
        in.push(state.left(i, l), l);
    for (int j = 0; j < n; ++j)
      if (inst.has_edge(i, j))
        next.right(i, j) = checked_sub(inst.scaled(i, j), in.max_excluding(j));
  }
  for (int j = 0; j < n; ++j) {
    TopTwo in;
    for (int k = 0; k < n; ++k)
      if (inst.has_edge(k, j))
        in.push(state.right(k, j), k);
    for (int i = 0; i < n; ++i)
      if (inst.has_edge(i, j))
        next.left(i, j) = checked_sub(inst.scaled(i, j), in.max_excluding(i));
  }

  if (options.recenter) {
    Wide top = kNone;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (inst.has_edge(i, j))
          top = std::max({top, next.right(i, j), next.left(i, j)});
    if (top != kNone && top != 0) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (inst.has_edge(i, j)) {
            next.right(i, j) = checked_sub(next.right(i, j), top);
            next.left(i, j) = checked_sub(next.left(i, j), top);
          }
    }
  }
  return next;
}

BeliefSnapshot beliefs(const Instance& inst, const MessageState& state) {
  const int n = inst.size();
  BeliefSnapshot b;
  b.iteration = state.iteration;
  b.left.assign(static_cast<std::size_t>(n), kUnresolved);
  b.right.assign(static_cast<std::size_t>(n), kUnresolved);
  // A depth-0 computation tree has no root edge.
  if (state.iteration == 0)
    return b;

  std::vector<std::pair<Wide, int>> incoming;
  for (int i = 0; i < n; ++i) {
    incoming.clear();
    for (int j = 0; j < n; ++j)
      if (inst.has_edge(i, j))
        incoming.emplace_back(state.left(i, j), j);
    b.left[static_cast<std::size_t>(i)] = unique_argmax(incoming);
  }
  for (int j = 0; j < n; ++j) {
    incoming.clear();
    for (int i = 0; i < n; ++i)
      if (inst.has_edge(i, j))
        incoming.emplace_back(state.right(i, j), i);
    b.right[static_cast<std::size_t>(j)] = unique_argmax(incoming);
  }
  return b;
}

PartialBpMatching partial_bp_matching(const BeliefSnapshot& snapshot) {
  const int n = static_cast<int>(snapshot.left.size());
  PartialBpMatching out;
  out.pairs.n = n;
  std::vector<bool> right_covered(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    const int j = snapshot.left[static_cast<std::size_t>(i)];
    if (j != kUnresolved && snapshot.right[static_cast<std::size_t>(j)] == i) {
      out.pairs.pairs.emplace_back(i, j);
      right_covered[static_cast<std::size_t>(j)] = true;
    } else {
      out.uncovered_left.push_back(i);
    }
  }
  for (int j = 0; j < n; ++j)
    if (!right_covered[static_cast<std::size_t>(j)])
      out.uncovered_right.push_back(j);
  return out;
}

bool encodes(const BeliefSnapshot& snapshot, const Matching& reference) {
  return snapshot.left == reference.left_partners() && snapshot.right == reference.right_partners();
}

void run_streaming(const Instance& inst, std::int64_t horizon,
                   const std::function<bool(const BeliefSnapshot&)>& on_iteration, StepOptions options) {
  if (horizon < 1)
    throw PreconditionError("horizon must be at least 1");
  auto state = init_messages(inst);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    try {
      state = step(inst, state, options);
    } catch (const MagnitudeOverflow&) {
      throw MagnitudeOverflow("message magnitude exceeded 128-bit range at iteration " + std::to_string(t));
    }
    if (!on_iteration(beliefs(inst, state)))
      return;
  }
}

std::vector<BeliefSnapshot> run_to_horizon(const Instance& inst, std::int64_t horizon, StepOptions options) {
  std::vector<BeliefSnapshot> out;
  run_streaming(inst, horizon, [&](const BeliefSnapshot& b) {
    out.push_back(b);
    return true;
  }, options);
  return out;
}

std::vector<TraceSummary> run_summaries(const Instance& inst, std::int64_t horizon, const Matching& reference) {
  std::vector<TraceSummary> out;
  run_streaming(inst, horizon, [&](const BeliefSnapshot& b) {
    TraceSummary row;
    row.t = b.iteration;
    row.pairs = static_cast<int>(partial_bp_matching(b).pairs.pairs.size());
    row.unresolved = static_cast<int>(std::count(b.left.begin(), b.left.end(), kUnresolved) +
                                      std::count(b.right.begin(), b.right.end(), kUnresolved));
    row.is_reference = encodes(b, reference);
    out.push_back(row);
    return true;
  });
  return out;
}

std::int64_t convergence_time(const Instance& inst, const Matching& reference, std::int64_t horizon) {
  if (!reference.perfect() || reference.n != inst.size())
    throw PreconditionError("reference must be a perfect matching of the instance");
  std::int64_t last_wrong = 0;
  run_streaming(inst, horizon, [&](const BeliefSnapshot& b) {
    if (!encodes(b, reference))
      last_wrong = b.iteration;
    return true;
  });
  if (last_wrong == horizon)
    throw HorizonExhausted("beliefs do not encode the reference matching at the horizon t=" + std::to_string(horizon));
  return last_wrong + 1;
}

std::int64_t certified_horizon(const InstanceMeta& meta) {
  if (meta.eps <= 0)
    throw PreconditionError("certified horizon needs eps > 0");
  const Rational bound = 2 * meta.n * meta.w_max / meta.eps;
  mpz_class ceil;
  mpz_cdiv_q(ceil.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
  return to_int64(Rational(ceil));
}

} // namespace bplab
