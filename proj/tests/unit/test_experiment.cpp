#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ctmdp/bellman.hpp"
#include "ctmdp/bench.hpp"
#include "ctmdp/error.hpp"
#include "ctmdp/experiment.hpp"

using namespace ctmdp;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.episodes = 3;
  cfg.runs = 2;
  cfg.grid_cells = 50;
  cfg.seed = 4;
  return cfg;
}

std::string regret_csv(const ExperimentConfig& cfg) {
  std::ostringstream out;
  write_regret_csv(out, run_learning_experiment(machine_repair_instance(), cfg));
  return out.str();
}

}  // namespace

TEST_CASE("regret CSV has one row per episode under the fixed header") {
  const auto rows = lines(regret_csv(small_config()));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "episode,avg_cum_regret,std_cum_regret,theorem1_bound");
  CHECK(rows[1].rfind("1,", 0) == 0);
  CHECK(rows[3].rfind("3,", 0) == 0);
}

TEST_CASE("results do not depend on the number of worker threads") {
  auto cfg = small_config();
  cfg.runs = 5;
  cfg.episodes = 10;
  cfg.threads = 1;
  const auto serial = regret_csv(cfg);
  cfg.threads = 3;
  CHECK(regret_csv(cfg) == serial);
  cfg.seed = 5;
  CHECK(regret_csv(cfg) != serial);
}

TEST_CASE("averages, spread and bound column") {
  auto cfg = small_config();
  cfg.episodes = 20;
  cfg.runs = 3;
  const auto m = machine_repair_instance();
  const auto table = run_learning_experiment(m, cfg);

  // Recompute from individual learner runs.
  std::vector<std::vector<double>> per_run;
  for (std::size_t s = 0; s < cfg.runs; ++s) {
    LearnerConfig lc;
    lc.num_episodes = cfg.episodes;
    lc.eps = cfg.eps;
    lc.lambda_max = m.lambda_max;
    lc.grid_cells = cfg.grid_cells;
    lc.seed = cfg.seed;
    lc.run = s;
    per_run.push_back(cumulative_regret(ct_ucbvi_run(m, lc).logs, table.v_star));
  }
  double eps_sum = 0.0;
  for (std::size_t k = 0; k < cfg.episodes; ++k) {
    const double mean = (per_run[0][k] + per_run[1][k] + per_run[2][k]) / 3.0;
    double var = 0.0;
    for (const auto& r : per_run) var += (r[k] - mean) * (r[k] - mean);
    CHECK(table.avg_cum_regret[k] == doctest::Approx(mean).epsilon(1e-12));
    CHECK(table.std_cum_regret[k] == doctest::Approx(std::sqrt(var / 2.0)).epsilon(1e-9).scale(1e-9));
    eps_sum += 1.0 / std::sqrt(k + 1.0);
    CHECK(table.bound[k] == doctest::Approx(theorem1_terms(2, 2, k + 1, 1.0, 2.0, 7.0, eps_sum).total()));
    if (k > 0) CHECK(table.avg_cum_regret[k] >= table.avg_cum_regret[k - 1] - 1e-6);
    CHECK(table.avg_cum_regret[k] <= table.bound[k]);
  }
  const double v_star = value_iteration(m, TimeGrid(1.0, 50), {1e-6, false, 100000}).values.at_horizon(0);
  CHECK(table.v_star == v_star);
}

TEST_CASE("a single run reports zero spread") {
  auto cfg = small_config();
  cfg.runs = 1;
  const auto table = run_learning_experiment(machine_repair_instance(), cfg);
  for (double s : table.std_cum_regret) CHECK(s == 0.0);
}

TEST_CASE("dumps capture run 0") {
  auto cfg = small_config();
  cfg.episodes = 4;
  ExperimentDumps dumps;
  run_learning_experiment(machine_repair_instance(), cfg, &dumps);
  CHECK(dumps.trajectories.size() == 4);
  REQUIRE(dumps.statistics);
  CHECK(dumps.statistics->episodes() == 4);
}

TEST_CASE("invalid experiment settings") {
  auto cfg = small_config();
  cfg.runs = 0;
  CHECK_THROWS_AS(run_learning_experiment(machine_repair_instance(), cfg), InvalidInput);
  cfg = small_config();
  cfg.episodes = 0;
  CHECK_THROWS_AS(run_learning_experiment(machine_repair_instance(), cfg), InvalidInput);
  cfg = small_config();
  cfg.delta = 0.0;
  CHECK_THROWS_AS(run_learning_experiment(machine_repair_instance(), cfg), InvalidInput);
  cfg = small_config();
  cfg.eval_eps = 0.0;
  CHECK_THROWS_AS(run_learning_experiment(machine_repair_instance(), cfg), InvalidInput);
  cfg = small_config();
  cfg.lambda_max = 2.5;  // below the fastest rate
  CHECK_THROWS_WITH_AS(run_learning_experiment(machine_repair_instance(), cfg), doctest::Contains("largest rate"),
                       InvalidInput);
}

TEST_CASE("value and policy CSVs") {
  const auto m = machine_repair_instance();
  const TimeGrid grid(1.0, 2);
  const auto v = value_iteration(m, grid, {1e-9, false, 1000}).values;
  std::ostringstream vout;
  write_value_csv(vout, v);
  const auto vrows = lines(vout.str());
  REQUIRE(vrows.size() == 4);
  CHECK(vrows[0] == "t,V_0,V_1");
  CHECK(vrows[1] == "0,0,0");
  CHECK(vrows[2].rfind("0.5,", 0) == 0);

  const auto pi = extract_policy(m, v);
  std::ostringstream pout;
  write_policy_csv(pout, pi);
  CHECK(lines(pout.str()).size() == 1 + 2 * 3);
  std::istringstream pin(pout.str());
  CHECK(read_policy_csv(pin, grid, 2, 2) == pi);
}

TEST_CASE("policy CSV parsing errors") {
  const TimeGrid grid(1.0, 1);
  auto parse = [&grid](const std::string& text) {
    std::istringstream in(text);
    return read_policy_csv(in, grid, 1, 2);
  };
  CHECK_THROWS_AS(parse("state,action\n"), InvalidInput);
  CHECK_THROWS_AS(parse("state,node,action\n0,0,0\n"), InvalidInput);
  CHECK_THROWS_AS(parse("state,node,action\n0,0,0\n0,1,2\n"), InvalidInput);
  CHECK_THROWS_AS(parse("state,node,action\n0,0,0\n0;1;1\n"), InvalidInput);
  CHECK(parse("state,node,action\n0,0,0\n0,1,1\n").at(0, 1) == 1);
}
