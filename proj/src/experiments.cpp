#include "bplab/experiments.hpp"

#include <algorithm>
#include <future>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "bplab/generators.hpp"
#include "bplab/oracles.hpp"
#include "json.hpp"

namespace bplab {

using ojson = nlohmann::ordered_json;

void ExperimentConfig::validate() const {
  if (family != "cycle" && family != "multicycle")
    throw PreconditionError("unknown family '" + family + "'");
  if (n_values.empty())
    throw PreconditionError("no instance size given");
  if (eps_values.empty())
    throw PreconditionError("no eps given");
  if (horizon && *horizon < 1)
    throw PreconditionError("horizon must be at least 1");
  if (horizon_cap < 1)
    throw PreconditionError("horizon cap must be at least 1");
  if (workers < 1)
    throw PreconditionError("need at least one worker");
}

std::int64_t resolve_horizon(const ExperimentConfig& config, const InstanceMeta& meta) {
  if (config.horizon)
    return *config.horizon;
  return std::min(certified_horizon(meta), config.horizon_cap);
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream out;
  for (unsigned int k = 0; k < len; ++k)
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
  return out.str();
}

std::string instance_id(const InstanceMeta& meta) {
  std::string id = meta.family + "_n" + std::to_string(meta.n) + "_w" + to_string(meta.w_max) + "_e" + to_string(meta.eps);
  if (meta.family == "multicycle")
    id += "_c" + std::to_string(meta.c);
  if (!meta.embedded)
    id += "_cycleonly";
  return id;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw PreconditionError("cannot open " + path + " for writing");
  out << contents;
  if (!out)
    throw std::runtime_error("failed writing " + path);
}

namespace {

const InstanceMeta& require_meta(const Instance& inst) {
  if (!inst.meta())
    throw PreconditionError("instance has no generator metadata");
  return *inst.meta();
}

int count_unresolved(const BeliefSnapshot& b) {
  return static_cast<int>(std::count(b.left.begin(), b.left.end(), kUnresolved) +
                          std::count(b.right.begin(), b.right.end(), kUnresolved));
}

BeliefSnapshot initial_beliefs(const Instance& inst) { return beliefs(inst, init_messages(inst)); }

// Visits the snapshots t = 0..t_max.
void for_each_snapshot(const Instance& inst, std::int64_t t_max, const std::function<void(const BeliefSnapshot&)>& visit) {
  visit(initial_beliefs(inst));
  if (t_max >= 1)
    run_streaming(inst, t_max, [&](const BeliefSnapshot& b) {
      visit(b);
      return true;
    });
}

std::string csv_ratio(const Rational& r) {
  return r.get_num().get_str() + "," + r.get_den().get_str();
}

ojson config_json(const ExperimentConfig& config) {
  ojson j;
  j["family"] = config.family;
  j["n"] = config.n_values;
  j["w_max"] = to_string(config.w_max);
  ojson eps = ojson::array();
  for (const auto& e : config.eps_values)
    eps.push_back(to_string(e));
  j["eps"] = eps;
  j["c"] = config.c ? ojson(*config.c) : ojson(nullptr);
  j["embed"] = config.embed;
  j["horizon"] = config.horizon ? ojson(*config.horizon) : ojson("certified");
  j["horizon_cap"] = config.horizon_cap;
  j["seed"] = config.seed;
  return j;
}

} // namespace

// ---- convergence ----

ConvergenceRow measure_convergence(const Instance& inst, std::int64_t horizon) {
  const auto& meta = require_meta(inst);
  if (meta.family != "cycle")
    throw PreconditionError("convergence sweeps need cycle instances");
  ConvergenceRow row;
  row.instance = instance_id(meta);
  row.instance_sha256 = sha256_hex(instance_to_json(inst));
  row.n = meta.n;
  row.w_max = meta.w_max;
  row.eps = meta.eps;
  row.horizon = horizon;
  row.lower = meta.n * meta.w_max / (2 * meta.eps);
  row.upper = 2 * meta.n * meta.w_max / meta.eps;
  row.convergence = convergence_time(inst, optimal_cycle_matching(meta.n), horizon);
  const Rational t(static_cast<long>(row.convergence));
  row.verdict = row.lower - meta.n <= t && t <= row.upper;
  return row;
}

std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& config) {
  config.validate();
  if (config.family != "cycle")
    throw PreconditionError("exp convergence needs --family cycle");
  std::vector<Instance> instances;
  for (int n : config.n_values)
    for (const auto& eps : config.eps_values)
      instances.push_back(gen_cycle(CycleParams{n, config.w_max, eps}, config.embed));

  std::vector<ConvergenceRow> rows(instances.size());
  for (std::size_t start = 0; start < instances.size(); start += config.workers) {
    const auto stop = std::min(instances.size(), start + config.workers);
    std::vector<std::future<ConvergenceRow>> jobs;
    for (auto k = start; k < stop; ++k)
      jobs.push_back(std::async(config.workers > 1 ? std::launch::async : std::launch::deferred, [&, k] {
        return measure_convergence(instances[k], resolve_horizon(config, *instances[k].meta()));
      }));
    for (auto k = start; k < stop; ++k)
      rows[k] = jobs[k - start].get();
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream out;
  out << "instance,n,w_max,eps,horizon,T,lower,upper,verdict\n";
  for (const auto& r : rows)
    out << r.instance << ',' << r.n << ',' << to_string(r.w_max) << ',' << to_string(r.eps) << ',' << r.horizon << ','
        << r.convergence << ',' << to_string(r.lower) << ',' << to_string(r.upper) << ',' << (r.verdict ? "pass" : "fail")
        << '\n';
  return out.str();
}

std::vector<ConvergenceRow> cmd_convergence(const ExperimentConfig& config) {
  auto rows = run_convergence(config);
  if (!config.csv_path.empty())
    write_file(config.csv_path, convergence_csv(rows));
  if (!config.manifest_path.empty()) {
    ojson m;
    m["command"] = "exp convergence";
    m["config"] = config_json(config);
    ojson list = ojson::array();
    for (const auto& r : rows) {
      ojson j;
      j["id"] = r.instance;
      j["sha256"] = r.instance_sha256;
      j["horizon"] = r.horizon;
      j["T"] = r.convergence;
      j["lower"] = to_string(r.lower);
      j["upper"] = to_string(r.upper);
      j["verdict"] = r.verdict;
      list.push_back(j);
    }
    m["instances"] = list;
    write_file(config.manifest_path, m.dump(1) + "\n");
  }
  return rows;
}

// ---- approximation curve ----

std::int64_t failure_window(int n, int c, const Rational& w_max, const Rational& eps) {
  if (n < 1 || c < 1 || !(w_max > 0) || !(eps > 0))
    throw PreconditionError("failure window needs n, c, w_max, eps > 0");
  mpz_class by_eps;
  const Rational a = w_max / (8 * c * eps);
  mpz_fdiv_q(by_eps.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());

  // floor((n / 2c)^(c/2)) = floor(sqrt(floor(n^c / (2c)^c))).
  mpz_class num, den, q, root;
  mpz_ui_pow_ui(num.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(c));
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(2 * c), static_cast<unsigned long>(c));
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  mpz_sqrt(root.get_mpz_t(), q.get_mpz_t());

  const mpz_class w = by_eps < root ? by_eps : root;
  return to_int64(Rational(w));
}

Rational failed_cycle_weight(int n_i, const Rational& w_max) { return -2 * w_max + n_i * w_max / 2; }

Rational completion_ratio_bound(int n, int failed) {
  if (n < 1 || failed < 0)
    throw PreconditionError("bound needs n >= 1 and failed >= 0");
  Rational r = 1 - Rational(4 * failed, n);
  r.canonicalize();
  return r;
}

std::vector<bool> failed_cycles(const InstanceMeta& meta, const PartialBpMatching& partial) {
  std::vector<bool> failed(meta.primes.size(), false);
  for (int i : partial.uncovered_left)
    if (int c = meta.cycle_of_left[static_cast<std::size_t>(i)]; c >= 0)
      failed[static_cast<std::size_t>(c)] = true;
  for (int j : partial.uncovered_right)
    if (int c = meta.cycle_of_right[static_cast<std::size_t>(j)]; c >= 0)
      failed[static_cast<std::size_t>(c)] = true;
  return failed;
}

std::vector<Rational> cycle_completion_weights(const Instance& inst, const Matching& completion) {
  const auto& meta = require_meta(inst);
  std::vector<Rational> out(meta.primes.size(), Rational(0));
  for (const auto& [i, j] : completion.pairs)
    if (int c = meta.cycle_of_left[static_cast<std::size_t>(i)]; c >= 0)
      out[static_cast<std::size_t>(c)] += inst.weight(i, j);
  return out;
}

ApproxCurve run_approx_curve(const Instance& inst, std::int64_t t_max) {
  const auto& meta = require_meta(inst);
  if (t_max < 0)
    throw PreconditionError("t_max must be non-negative");
  const auto opt = mwm_hungarian(inst);

  ApproxCurve curve;
  curve.instance = instance_id(meta);
  curve.instance_sha256 = sha256_hex(instance_to_json(inst));
  curve.primes = meta.primes;
  curve.mwm_weight = opt.weight;
  curve.window = failure_window(meta.n, meta.c, meta.w_max, meta.eps);

  for_each_snapshot(inst, t_max, [&](const BeliefSnapshot& b) {
    const auto partial = partial_bp_matching(b);
    const auto done = complete(inst, b);
    ApproxRow row;
    row.t = b.iteration;
    row.pairs = static_cast<int>(partial.pairs.pairs.size());
    row.unresolved = count_unresolved(b);
    row.is_mwm = done.matching == opt.matching;
    row.completion_scaled = matching_weight_scaled(inst, done.matching);
    row.ratio = approximation_ratio(inst, done.matching, opt.weight);
    row.failed_by_cycle = failed_cycles(meta, partial);
    row.failed = static_cast<int>(std::count(row.failed_by_cycle.begin(), row.failed_by_cycle.end(), true));
    row.cycle_weights = cycle_completion_weights(inst, done.matching);
    row.in_window = row.t >= 1 && row.t <= curve.window;
    row.bound = completion_ratio_bound(meta.n, row.failed);
    row.within_bound = row.ratio <= row.bound;
    for (const auto& comp : done.components)
      if (comp.component.edges.size() > comp.component.node_count())
        row.pseudoforest = false;
    for (const auto& [i, j] : partial.pairs.pairs)
      if (!done.matching.contains(i, j))
        row.extends_partial = false;
    curve.rows.push_back(std::move(row));
  });
  return curve;
}

ApproxCurve run_approx_curve(const ExperimentConfig& config) {
  config.validate();
  if (config.family != "multicycle")
    throw PreconditionError("exp approx needs --family multicycle");
  if (config.n_values.size() != 1 || config.eps_values.size() != 1)
    throw PreconditionError("exp approx takes a single n and eps");
  const auto inst = gen_multicycle(config.n_values.front(), config.w_max, config.eps_values.front(), config.c);
  return run_approx_curve(inst, resolve_horizon(config, *inst.meta()));
}

std::string approx_csv(const ApproxCurve& curve) {
  std::ostringstream out;
  out << "instance,t,pairs,unresolved,is_mwm,completion_weight_scaled,ratio_num,ratio_den,failed_cycles,in_window,"
         "bound_num,bound_den,within_bound,cycle_weights\n";
  for (const auto& r : curve.rows) {
    out << curve.instance << ',' << r.t << ',' << r.pairs << ',' << r.unresolved << ',' << (r.is_mwm ? 1 : 0) << ','
        << to_string(r.completion_scaled) << ',' << csv_ratio(r.ratio) << ',' << r.failed << ',' << (r.in_window ? 1 : 0)
        << ',' << csv_ratio(r.bound) << ',' << (r.within_bound ? 1 : 0) << ',';
    for (std::size_t k = 0; k < r.cycle_weights.size(); ++k)
      out << (k ? ";" : "") << to_string(r.cycle_weights[k]);
    out << '\n';
  }
  return out.str();
}

ApproxCurve cmd_approx_curve(const ExperimentConfig& config) {
  auto curve = run_approx_curve(config);
  if (!config.csv_path.empty())
    write_file(config.csv_path, approx_csv(curve));
  if (!config.manifest_path.empty()) {
    ojson m;
    m["command"] = "exp approx";
    m["config"] = config_json(config);
    ojson inst;
    inst["id"] = curve.instance;
    inst["sha256"] = curve.instance_sha256;
    inst["primes"] = curve.primes;
    inst["mwm_weight"] = to_string(curve.mwm_weight);
    inst["failure_window"] = curve.window;
    ojson per_cycle = ojson::array();
    const auto w_max = config.w_max;
    for (int p : curve.primes)
      per_cycle.push_back({{"n_i", p}, {"best_failed_weight", to_string(failed_cycle_weight(p, w_max))},
                           {"optimal_weight", to_string(Rational(p * w_max / 2))}});
    inst["cycles"] = per_cycle;
    inst["t_max"] = curve.rows.empty() ? 0 : curve.rows.back().t;
    m["instances"] = ojson::array({inst});
    write_file(config.manifest_path, m.dump(1) + "\n");
  }
  return curve;
}

// ---- traces ----

std::vector<TraceRow> bp_trace(const Instance& inst, std::int64_t horizon, const Matching& reference) {
  std::vector<TraceRow> rows;
  for (const auto& s : run_summaries(inst, horizon, reference))
    rows.push_back({s.t, s.pairs, s.unresolved, s.is_reference, std::nullopt});
  return rows;
}

std::vector<TraceRow> approx_trace(const Instance& inst, std::int64_t iters) {
  if (iters < 0)
    throw PreconditionError("iteration count must be non-negative");
  const auto opt = mwm_hungarian(inst);
  if (!(opt.weight > 0))
    throw PreconditionError("completion ratios need a positive optimum; shift the weights first");
  std::vector<TraceRow> rows;
  for_each_snapshot(inst, iters, [&](const BeliefSnapshot& b) {
    const auto done = complete(inst, b);
    rows.push_back({b.iteration, static_cast<int>(done.partial.pairs.size()), count_unresolved(b), encodes(b, opt.matching),
                    approximation_ratio(inst, done.matching, opt.weight)});
  });
  return rows;
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::ostringstream out;
  out << "t,pairs,unresolved,is_reference,completion_ratio_num,completion_ratio_den\n";
  for (const auto& r : rows) {
    out << r.t << ',' << r.pairs << ',' << r.unresolved << ',' << (r.is_reference ? 1 : 0) << ',';
    if (r.completion_ratio)
      out << csv_ratio(*r.completion_ratio);
    else
      out << ',';
    out << '\n';
  }
  return out.str();
}

} // namespace bplab
