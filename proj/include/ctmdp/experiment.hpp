#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ctmdp/bellman.hpp"
#include "ctmdp/learner.hpp"
#include "ctmdp/model.hpp"

namespace ctmdp {

/// Multi-seed learning experiment.
struct ExperimentConfig {
  std::size_t episodes = 1000;
  std::size_t runs = 1;
  double delta = 0.05;
  EpsSchedule eps = EpsSchedule::sqrt();
  /// Defaults to the instance's declared lambda_max.
  std::optional<double> lambda_max;
  std::size_t grid_cells = 200;
  std::uint64_t seed = 0;
  /// 0 means one per hardware thread.
  std::size_t threads = 0;
  double planning_eps = 1e-6;
  double eval_eps = 1e-6;

  void validate() const;
};

struct RegretTable {
  double v_star = 0.0;
  std::vector<double> avg_cum_regret;
  std::vector<double> std_cum_regret;
  std::vector<double> bound;
};

/// Optional per-run artefacts of run 0.
struct ExperimentDumps {
  std::vector<EpisodeTrajectory> trajectories;
  std::optional<VisitStatistics> statistics;
};

/// Runs `runs` independent learners (run s uses stream block s), averages
/// cumulative regret across runs and attaches the upper-bound column.
/// Results do not depend on the thread count.
RegretTable run_learning_experiment(const CtmdpModel& model, const ExperimentConfig& cfg,
                                    ExperimentDumps* dumps = nullptr);

/// Header: episode,avg_cum_regret,std_cum_regret,theorem1_bound
void write_regret_csv(std::ostream& out, const RegretTable& table);

/// t,V_0,...,V_{S-1}; one row per grid node.
void write_value_csv(std::ostream& out, const GridValueFunction& v);

/// state,node,action; one row per (state, grid node).
void write_policy_csv(std::ostream& out, const GridPolicy& pi);

/// Reads the policy CSV written above back onto `grid`.
GridPolicy read_policy_csv(std::istream& in, const TimeGrid& grid, std::size_t num_states, std::size_t num_actions);

}  // namespace ctmdp
