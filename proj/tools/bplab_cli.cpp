// bplab: command-line front end for the BP matching laboratory.
//
//   bplab gen --family cycle --n 3 --wmax 8 --eps 1/2 --embed -o c6.json
//   bplab bp run --instance c6.json --horizon 20
//   bplab bp converge --instance c6.json
//   bplab approx --instance mc.json --iters 40
//   bplab exp convergence --n 3,4,5 --wmax 8 --eps 3/5 --csv conv.csv --manifest conv.json
//   bplab exp approx --n 16 --wmax 8 --eps 1/100 --c 2 --horizon 40 --csv approx.csv
//   bplab oracle tree-belief --node a2 --depth 4
//
// Exit codes: 0 ok, 2 precondition violation, 3 horizon exhausted,
// 4 oracle cap exceeded, 1 anything else.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "bplab/approx.hpp"
#include "bplab/bp.hpp"
#include "bplab/experiments.hpp"
#include "bplab/generators.hpp"
#include "bplab/oracles.hpp"
#include "bplab/tree_oracle.hpp"

using namespace bplab;

namespace {

constexpr int kExitPrecondition = 2;
constexpr int kExitHorizon = 3;
constexpr int kExitCap = 4;

std::string pair_list(const Matching& m) {
  std::string out;
  for (const auto& [i, j] : m.pairs) {
    if (!out.empty())
      out += ' ';
    out += "a" + std::to_string(i + 1) + "-b" + std::to_string(j + 1);
  }
  return out;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

// The embedded C_6 instance with w_max = 8, eps = 1/2.
Instance example_instance() { return gen_cycle(CycleParams{3, 8, Rational(1, 2)}, true); }

Instance instance_or_example(const std::string& path) { return path.empty() ? example_instance() : load_instance(path); }

std::int64_t horizon_for(const Instance& inst, std::optional<std::int64_t> horizon) {
  if (horizon)
    return *horizon;
  if (!inst.meta())
    throw PreconditionError("--horizon is required for instances without generator metadata");
  return std::min(certified_horizon(*inst.meta()), kHorizonCap);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact max-sum belief propagation on the assignment problem"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a heavy-cycle or multi-cycle instance");
  std::string family = "cycle", wmax_s, eps_s, out_path;
  int gen_n = 0;
  std::optional<int> gen_c;
  bool embed = false;
  gen->add_option("--family", family)->check(CLI::IsMember({"cycle", "multicycle"}));
  gen->add_option("--n", gen_n, "cycle half-length or K_{n,n} side")->required();
  gen->add_option("--wmax", wmax_s, "w_max as P/Q")->required();
  gen->add_option("--eps", eps_s, "eps as P/Q")->required();
  gen->add_option("--c", gen_c, "number of cycles (multicycle)");
  gen->add_flag("--embed", embed, "embed the cycle into K_{n,n} with light edges");
  gen->add_option("-o,--out", out_path, "output JSON (default stdout)");

  // bp
  auto* bp = app.add_subcommand("bp", "Run belief propagation");
  bp->require_subcommand(1);
  std::string instance_path;
  std::optional<std::int64_t> horizon;
  auto* bp_run = bp->add_subcommand("run", "Trace summary CSV for t = 1..horizon");
  bp_run->add_option("--instance", instance_path)->required();
  bp_run->add_option("--horizon", horizon);
  bp_run->add_option("-o,--out", out_path);
  auto* bp_converge = bp->add_subcommand("converge", "Convergence time against the MWM");
  bp_converge->add_option("--instance", instance_path)->required();
  bp_converge->add_option("--horizon", horizon);

  // approx
  auto* approx = app.add_subcommand("approx", "Approximate BP completion ratio per iteration");
  std::int64_t iters = 0;
  approx->add_option("--instance", instance_path)->required();
  approx->add_option("--iters", iters)->required();
  approx->add_option("-o,--out", out_path);

  // exp
  auto* exp = app.add_subcommand("exp", "Experiment sweeps");
  exp->require_subcommand(1);
  std::vector<int> exp_n;
  std::vector<std::string> exp_eps;
  std::string csv_path, manifest_path;
  bool cycle_only = false;
  std::int64_t cap = kHorizonCap;
  unsigned workers = 1;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", exp_n)->required()->delimiter(',');
    sub->add_option("--wmax", wmax_s)->required();
    sub->add_option("--eps", exp_eps)->required()->delimiter(',');
    sub->add_option("--horizon", horizon, "explicit horizon (default: certified 2 n w_max / eps)");
    sub->add_option("--horizon-cap", cap);
    sub->add_option("--csv", csv_path);
    sub->add_option("--manifest", manifest_path);
    sub->add_option("--seed", seed);
  };
  auto* exp_conv = exp->add_subcommand("convergence", "Convergence time sweep over cycle instances");
  add_common(exp_conv);
  exp_conv->add_flag("--cycle-only", cycle_only, "run on the bare cycle instead of K_{n,n}");
  exp_conv->add_option("--workers", workers);
  auto* exp_approx = exp->add_subcommand("approx", "Completion ratio curve on a multi-cycle instance");
  add_common(exp_approx);
  exp_approx->add_option("--c", gen_c);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Reference oracles");
  oracle->require_subcommand(1);
  std::string node = "a1";
  std::int64_t depth = 1;
  std::size_t tree_cap = kDefaultTreeCap;
  int nib_l = 1, nib_n = 3;
  std::string nib_w = "8", nib_eps = "1/2";
  auto* o_mwm = oracle->add_subcommand("mwm", "Hungarian maximum-weight matching");
  auto* o_brute = oracle->add_subcommand("bruteforce", "Exhaustive maximum-weight matching (n <= 10)");
  auto* o_gap = oracle->add_subcommand("gap", "Uniqueness gap");
  auto* o_tree = oracle->add_subcommand("tree-belief", "Belief from the computation tree");
  for (auto* sub : {o_mwm, o_brute, o_gap, o_tree})
    sub->add_option("--instance", instance_path, "instance JSON (default: embedded C_6, w_max 8, eps 1/2)");
  o_tree->add_option("--node", node, "a<i> or b<j>, 1-based")->required();
  o_tree->add_option("--depth", depth)->required();
  o_tree->add_option("--cap", tree_cap);
  auto* o_nib = oracle->add_subcommand("nibbling", "Tail advantage Delta_l");
  o_nib->add_option("--l", nib_l)->required();
  o_nib->add_option("--n", nib_n);
  o_nib->add_option("--wmax", nib_w);
  o_nib->add_option("--eps", nib_eps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitPrecondition;
  }

  try {
    if (*gen) {
      const auto w = parse_rational(wmax_s);
      const auto e = parse_rational(eps_s);
      const auto inst = family == "cycle" ? gen_cycle(CycleParams{gen_n, w, e}, embed) : gen_multicycle(gen_n, w, e, gen_c);
      emit(out_path, instance_to_json(inst));
    } else if (*bp_run) {
      const auto inst = load_instance(instance_path);
      const auto opt = mwm_hungarian(inst);
      emit(out_path, trace_csv(bp_trace(inst, horizon_for(inst, horizon), opt.matching)));
    } else if (*bp_converge) {
      const auto inst = load_instance(instance_path);
      const auto h = horizon_for(inst, horizon);
      const auto t = convergence_time(inst, mwm_hungarian(inst).matching, h);
      std::cout << "horizon " << h << "\nconvergence_time " << t << '\n';
    } else if (*approx) {
      const auto inst = load_instance(instance_path);
      emit(out_path, trace_csv(approx_trace(inst, iters)));
    } else if (*exp_conv || *exp_approx) {
      ExperimentConfig config;
      config.family = *exp_conv ? "cycle" : "multicycle";
      config.n_values = exp_n;
      config.w_max = parse_rational(wmax_s);
      for (const auto& e : exp_eps)
        config.eps_values.push_back(parse_rational(e));
      config.c = gen_c;
      config.embed = !cycle_only;
      config.horizon = horizon;
      config.horizon_cap = cap;
      config.csv_path = csv_path;
      config.manifest_path = manifest_path;
      config.seed = seed;
      config.workers = workers;
      if (*exp_conv) {
        const auto rows = cmd_convergence(config);
        if (csv_path.empty())
          std::cout << convergence_csv(rows);
      } else {
        const auto curve = cmd_approx_curve(config);
        if (csv_path.empty())
          std::cout << approx_csv(curve);
      }
    } else if (*o_mwm || *o_brute) {
      const auto inst = instance_or_example(instance_path);
      const auto r = *o_mwm ? mwm_hungarian(inst) : mwm_bruteforce(inst);
      std::cout << "weight " << to_string(r.weight) << "\nmatching " << pair_list(r.matching) << '\n';
    } else if (*o_gap) {
      std::cout << "gap " << to_string(uniqueness_gap(instance_or_example(instance_path))) << '\n';
    } else if (*o_tree) {
      const auto inst = instance_or_example(instance_path);
      const auto v = parse_node(node);
      const int partner = oracle_belief(inst, v, depth, tree_cap);
      if (partner == kUnresolved) {
        std::cout << "unresolved\n";
      } else {
        const auto side = v.side == GraphNode::Side::left ? GraphNode::Side::right : GraphNode::Side::left;
        std::cout << node_label(GraphNode{side, partner}) << '\n';
      }
    } else if (*o_nib) {
      std::cout << to_string(nibbling_delta(nib_n, parse_rational(nib_w), parse_rational(nib_eps), nib_l)) << '\n';
    }
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const HorizonExhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitHorizon;
  } catch (const OracleCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
