#include "ctmdp/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ctmdp/bench.hpp"
#include "ctmdp/error.hpp"
#include "ctmdp/format.hpp"

namespace ctmdp {

void ExperimentConfig::validate() const {
  if (episodes == 0) throw InvalidInput("experiment: episodes must be >= 1");
  if (runs == 0) throw InvalidInput("experiment: runs must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("experiment: delta must lie in (0, 1)");
  if (grid_cells == 0) throw InvalidInput("experiment: grid must have at least one cell");
  if (lambda_max && !(*lambda_max > 0.0)) throw InvalidInput("experiment: lambda_max must be positive");
  if (!(planning_eps > 0.0) || !(eval_eps > 0.0)) throw InvalidInput("experiment: tolerances must be positive");
}

RegretTable run_learning_experiment(const CtmdpModel& model, const ExperimentConfig& cfg, ExperimentDumps* dumps) {
  cfg.validate();
  if (const auto issues = validate_model(model); !issues.empty()) throw InvalidInput("instance: " + issues.front());

  const double lambda_max = cfg.lambda_max.value_or(model.lambda_max);
  if (lambda_max < model.lambda_max)
    throw InvalidInput("experiment: lambda_max must be at least the instance's largest rate");
  const TimeGrid grid(model.horizon, cfg.grid_cells);
  RegretTable table;
  table.v_star = value_iteration(model, grid, {cfg.planning_eps, false, 1000000}).values.at_horizon(model.initial_state);

  std::vector<std::vector<double>> regrets(cfg.runs);
  std::vector<std::exception_ptr> failures(cfg.runs);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t s = next++; s < cfg.runs; s = next++) {
      try {
        LearnerConfig lc;
        lc.delta = cfg.delta;
        lc.num_episodes = cfg.episodes;
        lc.eps = cfg.eps;
        lc.lambda_max = lambda_max;
        lc.grid_cells = cfg.grid_cells;
        lc.seed = cfg.seed;
        lc.run = s;
        lc.eval_eps = cfg.eval_eps;
        LearnerHooks hooks;
        if (dumps && s == 0) {
          hooks.on_trajectory = [dumps](std::size_t, const EpisodeTrajectory& traj) {
            dumps->trajectories.push_back(traj);
          };
        }
        LearnerRun run = ct_ucbvi_run(model, lc, hooks);
        regrets[s] = cumulative_regret(run.logs, table.v_star);
        if (dumps && s == 0) dumps->statistics = std::move(run.statistics);
      } catch (const std::exception& err) {
        std::ostringstream msg;
        msg << "run " << s << " (seed " << cfg.seed << "): " << err.what();
        failures[s] = dynamic_cast<const InvalidInput*>(&err) ? std::make_exception_ptr(InvalidInput(msg.str()))
                                                              : std::make_exception_ptr(Error(msg.str()));
      }
    }
  };

  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cfg.runs);
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  const std::size_t K = cfg.episodes;
  const double n = static_cast<double>(cfg.runs);
  table.avg_cum_regret.assign(K, 0.0);
  table.std_cum_regret.assign(K, 0.0);
  table.bound.assign(K, 0.0);
  double eps_sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    double mean = 0.0;
    for (const auto& r : regrets) mean += r[k];
    mean /= n;
    double var = 0.0;
    for (const auto& r : regrets) var += (r[k] - mean) * (r[k] - mean);
    table.avg_cum_regret[k] = mean;
    table.std_cum_regret[k] = cfg.runs > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    eps_sum += cfg.eps(k + 1, lambda_max, model.horizon);
    table.bound[k] = theorem1_terms(model.num_states, model.num_actions, k + 1, model.horizon, model.lambda_min,
                                    lambda_max, eps_sum)
                         .total();
  }
  return table;
}

void write_regret_csv(std::ostream& out, const RegretTable& table) {
  out << "episode,avg_cum_regret,std_cum_regret,theorem1_bound\n";
  for (std::size_t k = 0; k < table.avg_cum_regret.size(); ++k) {
    out << (k + 1) << ',' << format_number(table.avg_cum_regret[k]) << ',' << format_number(table.std_cum_regret[k])
        << ',' << format_number(table.bound[k]) << '\n';
  }
}

void write_value_csv(std::ostream& out, const GridValueFunction& v) {
  out << "t";
  for (std::size_t x = 0; x < v.num_states(); ++x) out << ",V_" << x;
  out << '\n';
  for (std::size_t i = 0; i < v.grid().num_nodes(); ++i) {
    out << format_number(v.grid().node(i));
    for (std::size_t x = 0; x < v.num_states(); ++x) out << ',' << format_number(v.at(x, i));
    out << '\n';
  }
}

void write_policy_csv(std::ostream& out, const GridPolicy& pi) {
  out << "state,node,action\n";
  for (std::size_t x = 0; x < pi.num_states(); ++x)
    for (std::size_t i = 0; i < pi.grid().num_nodes(); ++i) out << x << ',' << i << ',' << pi.at(x, i) << '\n';
}

GridPolicy read_policy_csv(std::istream& in, const TimeGrid& grid, std::size_t num_states, std::size_t num_actions) {
  GridPolicy pi(grid, num_states);
  std::vector<bool> seen(num_states * grid.num_nodes(), false);
  std::string line;
  if (!std::getline(in, line) || line.rfind("state,node,action", 0) != 0)
    throw InvalidInput("policy: expected header 'state,node,action'");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t x = 0, i = 0, a = 0;
    char c1 = 0, c2 = 0;
    if (!(row >> x >> c1 >> i >> c2 >> a) || c1 != ',' || c2 != ',')
      throw InvalidInput("policy: malformed line " + std::to_string(line_no));
    if (x >= num_states || i >= grid.num_nodes() || a >= num_actions)
      throw InvalidInput("policy: entry out of range at line " + std::to_string(line_no));
    pi.at(x, i) = a;
    seen[x * grid.num_nodes() + i] = true;
  }
  for (bool s : seen)
    if (!s) throw InvalidInput("policy: file does not cover every (state, node) of the grid");
  return pi;
}

}  // namespace ctmdp
