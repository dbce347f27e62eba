#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ctmdp/model.hpp"
#include "ctmdp/simulator.hpp"

namespace ctmdp {

/// Per-pair sufficient statistics accumulated over completed episodes:
/// time spent at (x,a), observed transitions (x,a) -> y, and the number of
/// visits whose landing state was observed.
class VisitStatistics {
 public:
  VisitStatistics(std::size_t num_states, std::size_t num_actions, double horizon);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  double horizon() const { return horizon_; }
  std::size_t episodes() const { return episodes_; }

  double duration(std::size_t x, std::size_t a) const { return duration_[x * num_actions_ + a]; }
  std::size_t count(std::size_t x, std::size_t a, std::size_t y) const {
    return counts_[(x * num_actions_ + a) * num_states_ + y];
  }
  std::size_t count_plus(std::size_t x, std::size_t a) const { return count_plus_[x * num_actions_ + a]; }

  std::span<const std::size_t> counts_row(std::size_t x, std::size_t a) const {
    return {counts_.data() + (x * num_actions_ + a) * num_states_, num_states_};
  }

  /// Folds one episode in. Every segment starting at or before H adds
  /// min(holding, H - t_n) of duration; only segments whose landing state
  /// was observed add a transition count.
  void record(const EpisodeTrajectory& traj);

  bool operator==(const VisitStatistics&) const = default;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  double horizon_;
  std::size_t episodes_ = 0;
  std::vector<double> duration_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> count_plus_;
};

VisitStatistics update_statistics(VisitStatistics stats, const EpisodeTrajectory& traj);

/// Long-format CSV dump: state,action,duration,n_plus,next_state,count
void write_statistics_csv(std::ostream& out, const VisitStatistics& stats);

struct ConfidenceConfig {
  double delta = 0.05;
  /// Planned total number of episodes.
  std::size_t num_episodes = 1;
  double horizon = 1.0;
  double lambda_max = 1.0;
  std::size_t num_states = 1;
  std::size_t num_actions = 1;

  /// L(delta) = 4 ln(2 S A K / delta).
  double log_term() const;
  void validate() const;
};

/// N(x,a,.) / max{1, N+(x,a)}; the zero vector for an unsampled pair.
std::vector<double> empirical_transition(const VisitStatistics& stats, std::size_t x, std::size_t a);

/// min{N+/T, lambda_max}, or 0 when nothing has been observed at the pair.
double estimate_rate(const VisitStatistics& stats, std::size_t x, std::size_t a, double lambda_max);

/// Rate confidence width sqrt(lambda_max L / max{T, L / lambda_max}).
double rate_width(const VisitStatistics& stats, std::size_t x, std::size_t a, const ConfidenceConfig& cfg);

/// L1 transition confidence width
/// sqrt(2 [S ln 2 + ln(S A H K^2 / delta)] / max{1, N+}).
double transition_width(const VisitStatistics& stats, std::size_t x, std::size_t a, const ConfidenceConfig& cfg);

/// max{lambda_max / (1 - e^{-lambda_max H}), 1}
double bonus_scale(double lambda_max, double horizon);

/// bonus_scale * (H^2 * rate_width + H * transition_width)
double bonus(const VisitStatistics& stats, std::size_t x, std::size_t a, const ConfidenceConfig& cfg);

/// Empirical model with reward r + b at every pair, flagged augmented.
/// `reward` holds the known reward rates, one per pair (x * A + a).
/// The bonus used at each pair is written to `bonus_out` when non-null.
CtmdpModel optimistic_model(std::span<const double> reward, std::size_t initial_state, const VisitStatistics& stats,
                            const ConfidenceConfig& cfg, std::vector<double>* bonus_out = nullptr);

}  // namespace ctmdp
