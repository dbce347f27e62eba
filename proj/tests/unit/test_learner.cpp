#include <doctest.h>

#include <cmath>
#include <string>

#include "ctmdp/bellman.hpp"
#include "ctmdp/bench.hpp"
#include "ctmdp/learner.hpp"

using namespace ctmdp;

namespace {

LearnerConfig small_config(std::size_t episodes) {
  LearnerConfig cfg;
  cfg.num_episodes = episodes;
  cfg.eps = EpsSchedule::sqrt();
  cfg.lambda_max = 7.0;
  cfg.grid_cells = 100;
  cfg.seed = 11;
  return cfg;
}

// Environment that only exposes sampled episodes and counts how often it runs.
class CountingEnvironment final : public Environment {
 public:
  explicit CountingEnvironment(CtmdpModel model) : model_(std::move(model)) {}
  EpisodeTrajectory run_episode(const GridPolicy& pi, RngSeed seed) override {
    ++calls;
    last_seed = seed;
    return sample_episode(model_, pi, seed);
  }
  std::size_t calls = 0;
  RngSeed last_seed;

 private:
  CtmdpModel model_;
};

}  // namespace

TEST_CASE("eps schedules") {
  CHECK(EpsSchedule::sqrt()(4, 7.0, 1.0) == 0.5);
  CHECK(EpsSchedule::corollary(0.5)(4, 7.0, 1.0) == doctest::Approx(0.5 * std::exp(-7.0)));
  CHECK(EpsSchedule::parse("sqrt").kind == EpsSchedule::Kind::Sqrt);
  const auto c = EpsSchedule::parse("corollary:0.75");
  CHECK(c.kind == EpsSchedule::Kind::Corollary);
  CHECK(c.alpha == 0.75);
  CHECK(c.to_string() == "corollary:0.75");
  CHECK_THROWS_AS(EpsSchedule::parse("linear"), InvalidInput);
  CHECK_THROWS_AS(EpsSchedule::parse("corollary:"), InvalidInput);
  CHECK_THROWS_AS(EpsSchedule::parse("corollary:-1"), InvalidInput);
  CHECK_THROWS_AS(EpsSchedule::parse("corollary:0.5x"), InvalidInput);
  double last = 1e300;
  for (std::size_t k = 1; k < 100; ++k) {
    const double e = EpsSchedule::corollary(0.5)(k, 7.0, 1.0);
    CHECK(e > 0.0);
    CHECK(e <= last);
    last = e;
  }
}

TEST_CASE("first episode plans on pure bonus and is truncated to t") {
  const auto m = machine_repair_instance();
  LearnerHooks hooks;
  std::size_t starts = 0;
  hooks.on_episode_start = [&starts](std::size_t k, const VisitStatistics& stats) {
    CHECK(stats.episodes() == k - 1);
    ++starts;
  };
  const auto run = ct_ucbvi_run(m, small_config(1), hooks);
  REQUIRE(run.logs.size() == 1);
  CHECK(starts == 1);
  CHECK(run.logs[0].optimistic_value == doctest::Approx(1.0));
  const double v_star = value_iteration(m, TimeGrid(1.0, 100), {1e-9, false, 10000}).values.at_horizon(0);
  const double regret = cumulative_regret(run.logs, v_star)[0];
  CHECK(regret >= -1e-6);
  CHECK(regret <= 1.0);
}

TEST_CASE("single-action models have no regret") {
  CtmdpModel m = CtmdpModel::zeros(2, 1, 1.0, 0, 2.0, 5.0);
  m.r(0, 0) = 0.7;
  m.r(1, 0) = 0.2;
  m.lambda(0, 0) = 2.0;
  m.lambda(1, 0) = 5.0;
  m.p(0, 0, 1) = 1.0;
  m.p(1, 0, 0) = 1.0;
  auto cfg = small_config(20);
  cfg.lambda_max = 5.0;
  const auto run = ct_ucbvi_run(m, cfg);
  const double v_star = value_iteration(m, TimeGrid(1.0, 100), {1e-9, false, 10000}).values.at_horizon(0);
  for (double r : cumulative_regret(run.logs, v_star)) CHECK(std::abs(r) < 1e-4);
}

TEST_CASE("learner sees the environment only through trajectories") {
  const auto m = machine_repair_instance();
  const auto cfg = small_config(30);
  const auto reference = ct_ucbvi_run(m, cfg);

  // Same known part, but no rates or transitions anywhere in the learner's reach.
  CtmdpModel blank = m;
  std::fill(blank.rate.begin(), blank.rate.end(), -1.0);
  std::fill(blank.transition.begin(), blank.transition.end(), -1.0);
  const KnownModel known = known_part(blank);
  CountingEnvironment env(m);
  const auto isolated = ct_ucbvi_run(known, env, cfg);

  CHECK(env.calls == 30);
  CHECK(env.last_seed.stream == 30);
  REQUIRE(isolated.logs.size() == reference.logs.size());
  for (std::size_t k = 0; k < reference.logs.size(); ++k) {
    CHECK(isolated.logs[k].realized_reward == reference.logs[k].realized_reward);
    CHECK(isolated.logs[k].optimistic_value == reference.logs[k].optimistic_value);
    CHECK(isolated.logs[k].vi_iterations == reference.logs[k].vi_iterations);
    CHECK(std::isnan(isolated.logs[k].policy_value));
  }
  CHECK(isolated.statistics == reference.statistics);
}

TEST_CASE("runs are reproducible and separated by run index") {
  const auto m = machine_repair_instance();
  auto cfg = small_config(15);
  const auto a = ct_ucbvi_run(m, cfg);
  const auto b = ct_ucbvi_run(m, cfg);
  cfg.run = 1;
  const auto c = ct_ucbvi_run(m, cfg);
  bool differs = false;
  for (std::size_t k = 0; k < a.logs.size(); ++k) {
    CHECK(a.logs[k].realized_reward == b.logs[k].realized_reward);
    CHECK(a.logs[k].policy_value == b.logs[k].policy_value);
    differs = differs || a.logs[k].realized_reward != c.logs[k].realized_reward;
  }
  CHECK(differs);
}

TEST_CASE("collected data only grows and expected regret stays nonnegative") {
  const auto m = machine_repair_instance();
  const auto cfg = small_config(60);
  std::optional<VisitStatistics> previous;
  LearnerHooks hooks;
  hooks.on_episode_start = [&previous](std::size_t, const VisitStatistics& stats) {
    if (previous) {
      for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t a = 0; a < 2; ++a) {
          CHECK(stats.duration(x, a) >= previous->duration(x, a));
          CHECK(stats.count_plus(x, a) >= previous->count_plus(x, a));
        }
    }
    previous = stats;
  };
  const auto run = ct_ucbvi_run(m, cfg, hooks);
  const double v_star = value_iteration(m, TimeGrid(1.0, 100), {1e-9, false, 10000}).values.at_horizon(0);
  for (const auto& log : run.logs) {
    CHECK(log.policy_value <= v_star + 1e-5);
    CHECK(log.policy_value >= 0.0);
    CHECK(log.policy_value <= 1.0);
  }
}

TEST_CASE("bonus snapshots are kept on request") {
  const auto m = machine_repair_instance();
  auto cfg = small_config(3);
  cfg.keep_bonus = true;
  const auto run = ct_ucbvi_run(m, cfg);
  for (const auto& log : run.logs) {
    REQUIRE(log.bonus_snapshot);
    CHECK(log.bonus_snapshot->size() == 4);
    for (double b : *log.bonus_snapshot) CHECK(b > 0.0);
  }
  CHECK(!ct_ucbvi_run(m, small_config(2)).logs[0].bonus_snapshot);
}

TEST_CASE("planner non-convergence names the episode") {
  const auto m = machine_repair_instance();
  auto cfg = small_config(3);
  cfg.eps = EpsSchedule::corollary(0.5);
  cfg.vi_max_iters = 1;
  try {
    ct_ucbvi_run(m, cfg);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& err) {
    CHECK(std::string(err.what()).find("episode 1 (run 0)") != std::string::npos);
  }
}

TEST_CASE("cumulative regret") {
  std::vector<EpisodeLog> logs(3);
  for (auto& log : logs) log.policy_value = 0.5;
  CHECK(cumulative_regret(logs, 0.5) == std::vector<double>{0.0, 0.0, 0.0});
  logs[0].policy_value = 0.4;
  const auto r = cumulative_regret(logs, 0.5);
  CHECK(r[0] == doctest::Approx(0.1));
  CHECK(r[2] == doctest::Approx(0.1));
}

TEST_CASE("cached evaluator agrees with direct evaluation") {
  const auto m = machine_repair_instance();
  const auto eval = cached_policy_value(m, 1e-8);
  const TimeGrid grid(1.0, 50);
  const GridPolicy slow(grid, 2, 0), fast(grid, 2, 1);
  const double v_slow = policy_evaluation(m, slow, 1e-8).at_horizon(0);
  const double v_fast = policy_evaluation(m, fast, 1e-8).at_horizon(0);
  CHECK(eval(slow) == v_slow);
  CHECK(eval(slow) == v_slow);
  CHECK(eval(fast) == v_fast);
  CHECK(eval(slow) == v_slow);
}
