#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ctmdp/estimation.hpp"
#include "ctmdp/model.hpp"
#include "ctmdp/rng.hpp"
#include "ctmdp/simulator.hpp"
#include "ctmdp/time_grid.hpp"

namespace ctmdp {

/// Value-iteration accuracy per episode.
///   sqrt            eps_k = 1 / sqrt(k)
///   corollary:alpha eps_k = k^{-alpha} e^{-lambda_max H}
struct EpsSchedule {
  enum class Kind { Sqrt, Corollary };
  Kind kind = Kind::Corollary;
  double alpha = 0.5;

  static EpsSchedule sqrt() { return {Kind::Sqrt, 0.5}; }
  static EpsSchedule corollary(double alpha) { return {Kind::Corollary, alpha}; }
  /// Parses "sqrt" or "corollary:<alpha>"; throws InvalidInput otherwise.
  static EpsSchedule parse(const std::string& spec);

  double operator()(std::size_t k, double lambda_max, double horizon) const;
  std::string to_string() const;
};

/// What the learner is allowed to know about the environment.
struct KnownModel {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  double horizon = 1.0;
  std::size_t initial_state = 0;
  std::vector<double> reward;
};

KnownModel known_part(const CtmdpModel& m);

/// Source of episodes. The learner only ever sees trajectories.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual EpisodeTrajectory run_episode(const GridPolicy& pi, RngSeed seed) = 0;
};

/// Environment backed by a fully specified model.
class SimulatedEnvironment final : public Environment {
 public:
  explicit SimulatedEnvironment(CtmdpModel model) : model_(std::move(model)) {}
  EpisodeTrajectory run_episode(const GridPolicy& pi, RngSeed seed) override {
    return sample_episode(model_, pi, seed);
  }

 private:
  CtmdpModel model_;
};

struct LearnerConfig {
  double delta = 0.05;
  std::size_t num_episodes = 1;
  EpsSchedule eps = EpsSchedule::corollary(0.5);
  double lambda_max = 1.0;
  std::size_t grid_cells = 200;
  std::uint64_t seed = 0;
  /// Index of this run among independent repetitions; selects the stream block.
  std::uint64_t run = 0;
  std::size_t vi_max_iters = 100000;
  double eval_eps = 1e-6;
  bool keep_bonus = false;
};

struct EpisodeLog {
  std::size_t k = 0;
  /// V^{pi_k}(x0, H) on the true model; NaN when no evaluator was supplied.
  double policy_value = 0.0;
  double realized_reward = 0.0;
  std::size_t vi_iterations = 0;
  double eps = 0.0;
  /// Optimistic value V^k_{n_k}(x0, H) returned by value iteration.
  double optimistic_value = 0.0;
  std::optional<std::vector<double>> bonus_snapshot;
};

/// Evaluates a policy's value at (x0, H) on the true model. Measurement only.
using PolicyValueFn = std::function<double(const GridPolicy&)>;
/// Called at the start of episode k with the statistics from episodes < k.
using EpisodeStartHook = std::function<void(std::size_t k, const VisitStatistics&)>;
/// Called after episode k with its trajectory.
using TrajectoryHook = std::function<void(std::size_t k, const EpisodeTrajectory&)>;

struct LearnerHooks {
  PolicyValueFn evaluate;
  EpisodeStartHook on_episode_start;
  TrajectoryHook on_trajectory;
};

struct LearnerRun {
  std::vector<EpisodeLog> logs;
  VisitStatistics statistics;
};

/// Optimistic value-iteration learner. For k = 1..K: build the empirical
/// model plus bonus from past episodes, solve it by truncated value
/// iteration to eps_k, act greedily for one episode and fold the trajectory
/// into the statistics. Episode k samples stream RngSeed::for_episode(seed, run, k).
LearnerRun ct_ucbvi_run(const KnownModel& known, Environment& env, const LearnerConfig& cfg,
                        const LearnerHooks& hooks = {});

/// Same loop against a simulated copy of `true_model`, logging exact policy
/// values from policy evaluation on it.
LearnerRun ct_ucbvi_run(const CtmdpModel& true_model, const LearnerConfig& cfg, LearnerHooks hooks = {});

/// Policy-value evaluator on `model` with a one-entry cache; consecutive
/// episodes frequently repeat the same policy.
PolicyValueFn cached_policy_value(const CtmdpModel& model, double eps);

/// R_k = sum_{j <= k} (v_star - policy_value_j)
std::vector<double> cumulative_regret(const std::vector<EpisodeLog>& logs, double v_star);

}  // namespace ctmdp
