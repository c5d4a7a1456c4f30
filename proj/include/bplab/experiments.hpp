#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bplab/approx.hpp"
#include "bplab/bp.hpp"
#include "bplab/instance.hpp"

namespace bplab {

inline constexpr std::int64_t kHorizonCap = 1'000'000;

struct ExperimentConfig {
  std::string family = "cycle";
  std::vector<int> n_values;
  Rational w_max = 8;
  std::vector<Rational> eps_values;
  std::optional<int> c;
  bool embed = true;
  // Explicit horizon; otherwise the certified 2 n w_max / eps, capped.
  std::optional<std::int64_t> horizon;
  std::int64_t horizon_cap = kHorizonCap;
  std::string csv_path;
  std::string manifest_path;
  std::uint64_t seed = 0;
  unsigned workers = 1;

  void validate() const;
};

/// Horizon for an instance under the config's policy.
std::int64_t resolve_horizon(const ExperimentConfig& config, const InstanceMeta& meta);

std::string sha256_hex(const std::string& bytes);
std::string instance_id(const InstanceMeta& meta);

// ---- convergence sweep ----

struct ConvergenceRow {
  std::string instance;
  std::string instance_sha256;
  int n = 0;
  Rational w_max;
  Rational eps;
  std::int64_t horizon = 0;
  std::int64_t convergence = 0;
  Rational lower; // n w_max / (2 eps)
  Rational upper; // 2 n w_max / eps
  bool verdict = false; // lower - n <= T <= upper
};

ConvergenceRow measure_convergence(const Instance& inst, std::int64_t horizon);
std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& config);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

// ---- approximation curve on multi-cycle instances ----

/// min{w_max / (8 c eps), floor((n / 2c)^(c/2))}, rounded down.
std::int64_t failure_window(int n, int c, const Rational& w_max, const Rational& eps);

/// Best weight a completion can keep on a failed cycle of half-length n_i,
/// summed over its left nodes: -2 w_max + n_i w_max / 2.
Rational failed_cycle_weight(int n_i, const Rational& w_max);

/// Ratio ceiling with `failed` cycles lost: each one costs at least
/// 2 w_max out of W_opt = n w_max / 2, i.e. 1 - 4 failed / n.
Rational completion_ratio_bound(int n, int failed);

/// Cycles whose nodes are not all covered by the partial BP matching.
std::vector<bool> failed_cycles(const InstanceMeta& meta, const PartialBpMatching& partial);

/// Completion weight restricted to each cycle, summed over its left nodes.
std::vector<Rational> cycle_completion_weights(const Instance& inst, const Matching& completion);

struct ApproxRow {
  std::int64_t t = 0;
  int pairs = 0;
  int unresolved = 0;
  bool is_mwm = false;
  Wide completion_scaled = 0;
  Rational ratio;
  int failed = 0;
  std::vector<bool> failed_by_cycle;
  std::vector<Rational> cycle_weights;
  bool in_window = false;
  Rational bound = 1;
  bool within_bound = true;
  bool pseudoforest = true;
  bool extends_partial = true;
};

struct ApproxCurve {
  std::string instance;
  std::string instance_sha256;
  std::vector<int> primes;
  Rational mwm_weight;
  std::int64_t window = 0;
  std::vector<ApproxRow> rows; // t = 0..t_max
};

/// Runs BP to t_max and completes the partial matching at every t,
/// including t = 0.
ApproxCurve run_approx_curve(const Instance& inst, std::int64_t t_max);
ApproxCurve run_approx_curve(const ExperimentConfig& config);
std::string approx_csv(const ApproxCurve& curve);

// ---- generic traces ----

struct TraceRow {
  std::int64_t t = 0;
  int pairs = 0;
  int unresolved = 0;
  bool is_reference = false;
  std::optional<Rational> completion_ratio;
};

std::vector<TraceRow> bp_trace(const Instance& inst, std::int64_t horizon, const Matching& reference);
/// Same columns with the completion ratio filled in, t = 0..iters.
std::vector<TraceRow> approx_trace(const Instance& inst, std::int64_t iters);
std::string trace_csv(const std::vector<TraceRow>& rows);

// ---- commands writing result files ----

/// Writes the CSV and a JSON manifest (config, instance hashes, bounds).
/// Output bytes depend only on the config.
std::vector<ConvergenceRow> cmd_convergence(const ExperimentConfig& config);
ApproxCurve cmd_approx_curve(const ExperimentConfig& config);

void write_file(const std::string& path, const std::string& contents);

} // namespace bplab
