#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ctmdp/model.hpp"
#include "ctmdp/rng.hpp"
#include "ctmdp/time_grid.hpp"

namespace ctmdp {

struct Segment {
  std::size_t state = 0;
  std::size_t action = 0;
  /// Observed holding time; the final segment is clipped at the horizon.
  double holding = 0.0;

  bool operator==(const Segment&) const = default;
};

/// Jump chain of one episode. Observed holdings sum to the horizon, and the
/// state entered after the final (clipped) segment is never observed.
struct EpisodeTrajectory {
  std::vector<Segment> segments;
  bool truncated = false;
  double reward = 0.0;

  /// t_n = sum of the holdings before segment n.
  std::vector<double> jump_times() const;

  /// Number of transitions whose landing state was observed.
  std::size_t observed_transitions() const {
    return segments.empty() ? 0 : segments.size() - (truncated ? 1 : 0);
  }

  bool operator==(const EpisodeTrajectory&) const = default;
};

/// Action choice as a function of (state, remaining horizon).
using ActionRule = std::function<std::size_t(std::size_t state, double remaining)>;

/// Runs one episode from x0 over [0, H]. At each jump the action is chosen
/// from the remaining horizon; holding times are Exp(lambda(x,a)) and
/// reward accrues at r(x,a) per unit of observed time.
EpisodeTrajectory sample_episode(const CtmdpModel& m, const ActionRule& rule, StreamRng& rng);

EpisodeTrajectory sample_episode(const CtmdpModel& m, const GridPolicy& pi, RngSeed seed);

struct MonteCarloEstimate {
  double mean = 0.0;
  /// Absent for a single run.
  std::optional<double> std_error;
  std::size_t runs = 0;
};

/// Mean and standard error of the episode reward over `runs` independent
/// streams (stream e for episode e).
MonteCarloEstimate mean_episode_reward(const CtmdpModel& m, const GridPolicy& pi, std::size_t runs,
                                       std::uint64_t seed);

/// Debug dump, one line per segment: episode,step,state,action,holding,truncated
void write_trajectory_header(std::ostream& out);
void write_trajectory_rows(std::ostream& out, std::size_t episode, const EpisodeTrajectory& traj);

}  // namespace ctmdp
