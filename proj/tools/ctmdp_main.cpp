#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "ctmdp/bellman.hpp"
#include "ctmdp/bench.hpp"
#include "ctmdp/error.hpp"
#include "ctmdp/experiment.hpp"
#include "ctmdp/format.hpp"
#include "ctmdp/instance_io.hpp"
#include "ctmdp/simulator.hpp"

namespace fs = std::filesystem;
using namespace ctmdp;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

struct SolveArgs {
  std::string instance = "machine-repair";
  std::size_t grid = 2000;
  double eps = 1e-12;
  std::string out;
};

int cmd_solve(const SolveArgs& args) {
  const CtmdpModel m = resolve_instance(args.instance);
  const TimeGrid grid(m.horizon, args.grid);
  const auto vi = value_iteration(m, grid, {args.eps, false, 10000000});
  std::cout << "V*(x0,H) = " << format_number(vi.values.at_horizon(m.initial_state)) << "\n";
  std::cout << "iterations = " << vi.iterations << "\n";
  if (!args.out.empty()) {
    const fs::path dir(args.out);
    fs::create_directories(dir);
    auto vout = open_output(dir / "value.csv");
    write_value_csv(vout, vi.values);
    finish(vout, dir / "value.csv");
    auto pout = open_output(dir / "policy.csv");
    write_policy_csv(pout, extract_policy(m, vi.values));
    finish(pout, dir / "policy.csv");
  }
  return 0;
}

struct LearnArgs {
  std::string instance = "machine-repair";
  std::size_t episodes = 1000;
  std::size_t runs = 1;
  double delta = 0.05;
  std::optional<double> lambda_max;
  std::size_t grid = 200;
  std::string eps_schedule = "sqrt";
  std::uint64_t seed = 0;
  std::string out = ".";
  std::size_t threads = 0;
  bool dump = false;
};

int cmd_learn(const LearnArgs& args) {
  const CtmdpModel m = resolve_instance(args.instance);
  ExperimentConfig cfg;
  cfg.episodes = args.episodes;
  cfg.runs = args.runs;
  cfg.delta = args.delta;
  cfg.eps = EpsSchedule::parse(args.eps_schedule);
  cfg.lambda_max = args.lambda_max;
  cfg.grid_cells = args.grid;
  cfg.seed = args.seed;
  cfg.threads = args.threads;
  cfg.validate();

  ExperimentDumps dumps;
  const RegretTable table = run_learning_experiment(m, cfg, args.dump ? &dumps : nullptr);

  const fs::path dir(args.out);
  fs::create_directories(dir);
  auto out = open_output(dir / "regret.csv");
  write_regret_csv(out, table);
  finish(out, dir / "regret.csv");

  if (args.dump) {
    auto tout = open_output(dir / "trajectories_run0.csv");
    write_trajectory_header(tout);
    for (std::size_t k = 0; k < dumps.trajectories.size(); ++k) write_trajectory_rows(tout, k + 1, dumps.trajectories[k]);
    finish(tout, dir / "trajectories_run0.csv");
    if (dumps.statistics) {
      auto sout = open_output(dir / "statistics_run0.csv");
      write_statistics_csv(sout, *dumps.statistics);
      finish(sout, dir / "statistics_run0.csv");
    }
  }
  std::cout << "V*(x0,H) = " << format_number(table.v_star) << "\n";
  std::cout << "final avg_cum_regret = " << format_number(table.avg_cum_regret.back()) << "\n";
  std::cout << "wrote " << (dir / "regret.csv").string() << "\n";
  return 0;
}

struct LowerBoundArgs {
  std::size_t states = 9;
  std::size_t actions = 2;
  std::size_t episodes = 36;
  double lambda_max = 7.0;
  double horizon = 1.0;
};

int cmd_lower_bound(const LowerBoundArgs& args) {
  if (args.states < 6 || !tree_depth(args.states, args.actions)) {
    std::ostringstream msg;
    msg << "S = " << args.states << " with A = " << args.actions << " admits no tree depth d";
    if (args.actions >= 2) {
      msg << "; nearest valid S:";
      for (std::size_t s : nearest_valid_states(args.states, args.actions)) msg << ' ' << s;
    }
    throw InvalidInput(msg.str());
  }
  const auto params = make_hard_params(args.states, args.actions, args.episodes, args.lambda_max, args.horizon, 0);
  std::cout << "d = " << params.depth << "\n";
  std::cout << "L = " << params.num_leaves << "\n";
  std::cout << "Delta = " << format_number(params.gap) << "\n";
  std::cout << "lower_bound = "
            << format_number(lower_bound_value(args.states, args.actions, args.episodes, params.depth,
                                               args.lambda_max, args.horizon))
            << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string instance = "machine-repair";
  std::string policy = "optimal";
  std::size_t grid = 200;
  double eps = 1e-12;
  std::size_t mc_runs = 0;
  std::uint64_t seed = 0;
};

int cmd_evaluate(const EvaluateArgs& args) {
  const CtmdpModel m = resolve_instance(args.instance);
  const TimeGrid grid(m.horizon, args.grid);
  std::optional<GridPolicy> pi;
  if (args.policy == "optimal") {
    pi = extract_policy(m, value_iteration(m, grid, {args.eps, false, 10000000}).values);
  } else if (args.policy.rfind("constant:", 0) == 0) {
    std::size_t a = 0;
    try {
      std::size_t used = 0;
      a = std::stoul(args.policy.substr(9), &used);
      if (used != args.policy.size() - 9) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw InvalidInput("policy: bad constant action in '" + args.policy + "'");
    }
    if (a >= m.num_actions) throw InvalidInput("policy: action " + std::to_string(a) + " out of range");
    pi = GridPolicy(grid, m.num_states, a);
  } else {
    std::ifstream in(args.policy);
    if (!in) throw InvalidInput("policy: cannot open '" + args.policy + "'");
    pi = read_policy_csv(in, grid, m.num_states, m.num_actions);
  }
  const auto v = policy_evaluation(m, *pi, args.eps, 10000000);
  std::cout << "V^pi(x0,H) = " << format_number(v.at_horizon(m.initial_state)) << "\n";
  if (args.mc_runs > 0) {
    const auto mc = mean_episode_reward(m, *pi, args.mc_runs, args.seed);
    std::cout << "monte_carlo = " << format_number(mc.mean);
    if (mc.std_error) std::cout << " +- " << format_number(*mc.std_error);
    std::cout << " (" << mc.runs << " episodes)\n";
  }
  return 0;
}

struct ExportArgs {
  std::string instance = "machine-repair";
  std::string out;
};

int cmd_export(const ExportArgs& args) {
  const CtmdpModel m = resolve_instance(args.instance);
  if (args.out.empty()) {
    write_instance(std::cout, m);
  } else {
    const fs::path path(args.out);
    auto out = open_output(path);
    write_instance(out, m);
    finish(out, path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-time MDP solver, learner and regret benchmarks"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve an instance by value iteration");
  s->add_option("--instance", solve.instance, "machine-repair, single-absorbing, hard:S:A:j:gap or a file");
  s->add_option("--grid", solve.grid, "Grid cells N")->check(CLI::PositiveNumber);
  s->add_option("--eps", solve.eps, "Stopping tolerance")->check(CLI::PositiveNumber);
  s->add_option("--out", solve.out, "Directory for value.csv and policy.csv");

  LearnArgs learn;
  auto* l = app.add_subcommand("learn", "Run independent learners and write regret.csv");
  l->add_option("--instance", learn.instance, "Instance name or file");
  l->add_option("--episodes", learn.episodes, "Episodes K per run")->check(CLI::PositiveNumber);
  l->add_option("--runs", learn.runs, "Independent runs")->check(CLI::PositiveNumber);
  l->add_option("--delta", learn.delta, "Confidence level")->check(CLI::Range(0.0, 1.0));
  l->add_option("--lambda-max", learn.lambda_max, "Rate upper bound known to the learner");
  l->add_option("--grid", learn.grid, "Grid cells N")->check(CLI::PositiveNumber);
  l->add_option("--eps-schedule", learn.eps_schedule, "sqrt or corollary:<alpha>");
  l->add_option("--seed", learn.seed, "Base seed");
  l->add_option("--out", learn.out, "Output directory");
  l->add_option("--threads", learn.threads, "Worker threads (0 = hardware)");
  l->add_flag("--dump", learn.dump, "Also write trajectories and statistics of run 0");

  LowerBoundArgs lb;
  auto* b = app.add_subcommand("lower-bound", "Evaluate the minimax regret floor");
  b->add_option("--states", lb.states, "S")->check(CLI::PositiveNumber);
  b->add_option("--actions", lb.actions, "A")->check(CLI::PositiveNumber);
  b->add_option("--episodes", lb.episodes, "K")->check(CLI::PositiveNumber);
  b->add_option("--lambda-max", lb.lambda_max, "Rate of every pair")->check(CLI::PositiveNumber);
  b->add_option("--horizon", lb.horizon, "H")->check(CLI::PositiveNumber);

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate-policy", "Evaluate a grid policy");
  e->add_option("--instance", ev.instance, "Instance name or file");
  e->add_option("--policy", ev.policy, "optimal, constant:<a> or a policy CSV");
  e->add_option("--grid", ev.grid, "Grid cells N")->check(CLI::PositiveNumber);
  e->add_option("--mc-runs", ev.mc_runs, "Also simulate this many episodes");
  e->add_option("--seed", ev.seed, "Seed for simulation");

  ExportArgs ex;
  auto* x = app.add_subcommand("export-instance", "Write an instance in the text format");
  x->add_option("--instance", ex.instance, "Instance name or file");
  x->add_option("--out", ex.out, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitInvalid;
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*l) return cmd_learn(learn);
    if (*b) return cmd_lower_bound(lb);
    if (*e) return cmd_evaluate(ev);
    if (*x) return cmd_export(ex);
  } catch (const InvalidInput& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
