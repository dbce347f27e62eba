#include "ctmdp/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ctmdp/error.hpp"
#include "ctmdp/format.hpp"

namespace ctmdp {

VisitStatistics::VisitStatistics(std::size_t num_states, std::size_t num_actions, double horizon)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      duration_(num_states * num_actions, 0.0),
      counts_(num_states * num_actions * num_states, 0),
      count_plus_(num_states * num_actions, 0) {}

void VisitStatistics::record(const EpisodeTrajectory& traj) {
  // Validate before touching any counter so a bad trajectory leaves us intact.
  for (const auto& seg : traj.segments) {
    if (!(seg.holding >= 0.0) || !std::isfinite(seg.holding))
      throw InvalidInput("update_statistics: malformed trajectory (negative or non-finite holding time)");
    if (seg.state >= num_states_ || seg.action >= num_actions_)
      throw InvalidInput("update_statistics: malformed trajectory (state or action out of range)");
  }

  double t = 0.0;
  const std::size_t n_segments = traj.segments.size();
  for (std::size_t n = 0; n < n_segments; ++n) {
    const auto& seg = traj.segments[n];
    if (t > horizon_) break;
    const std::size_t pair = seg.state * num_actions_ + seg.action;
    duration_[pair] += std::min(seg.holding, horizon_ - t);
    t += seg.holding;
    // The landing state is the next segment's state; the last segment of a
    // trajectory never reveals where it lands.
    if (n + 1 < n_segments && t <= horizon_) {
      ++counts_[pair * num_states_ + traj.segments[n + 1].state];
      ++count_plus_[pair];
    }
  }
  ++episodes_;
}

VisitStatistics update_statistics(VisitStatistics stats, const EpisodeTrajectory& traj) {
  stats.record(traj);
  return stats;
}

void write_statistics_csv(std::ostream& out, const VisitStatistics& stats) {
  out << "state,action,duration,n_plus,next_state,count\n";
  for (std::size_t x = 0; x < stats.num_states(); ++x)
    for (std::size_t a = 0; a < stats.num_actions(); ++a)
      for (std::size_t y = 0; y < stats.num_states(); ++y)
        out << x << ',' << a << ',' << format_number(stats.duration(x, a)) << ',' << stats.count_plus(x, a) << ','
            << y << ',' << stats.count(x, a, y) << '\n';
}

double ConfidenceConfig::log_term() const {
  const double SAK = static_cast<double>(num_states * num_actions * num_episodes);
  return 4.0 * std::log(2.0 * SAK / delta);
}

void ConfidenceConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("confidence: delta must lie in (0, 1)");
  if (num_episodes == 0 || num_states == 0 || num_actions == 0)
    throw InvalidInput("confidence: S, A and K must be positive");
  if (!(lambda_max > 0.0)) throw InvalidInput("confidence: lambda_max must be positive");
  if (!(horizon > 0.0)) throw InvalidInput("confidence: horizon must be positive");
  const double K = static_cast<double>(num_episodes);
  if (!(horizon * K * K * static_cast<double>(num_states * num_actions) / delta > 1.0))
    throw InvalidInput("confidence: S A H K^2 / delta must exceed 1");
}

std::vector<double> empirical_transition(const VisitStatistics& stats, std::size_t x, std::size_t a) {
  std::vector<double> p(stats.num_states(), 0.0);
  const double denom = static_cast<double>(std::max<std::size_t>(1, stats.count_plus(x, a)));
  auto row = stats.counts_row(x, a);
  for (std::size_t y = 0; y < p.size(); ++y) p[y] = static_cast<double>(row[y]) / denom;
  return p;
}

double estimate_rate(const VisitStatistics& stats, std::size_t x, std::size_t a, double lambda_max) {
  const double T = stats.duration(x, a);
  if (T == 0.0) return 0.0;
  return std::min(static_cast<double>(stats.count_plus(x, a)) / T, lambda_max);
}

double rate_width(const VisitStatistics& stats, std::size_t x, std::size_t a, const ConfidenceConfig& cfg) {
  const double L = cfg.log_term();
  const double T = stats.duration(x, a);
  if (T < L / cfg.lambda_max) return cfg.lambda_max;
  return std::sqrt(cfg.lambda_max * L / T);
}

double transition_width(const VisitStatistics& stats, std::size_t x, std::size_t a, const ConfidenceConfig& cfg) {
  const double S = static_cast<double>(cfg.num_states);
  const double A = static_cast<double>(cfg.num_actions);
  const double K = static_cast<double>(cfg.num_episodes);
  const double numer = 2.0 * (S * std::log(2.0) + std::log(S * A * cfg.horizon * K * K / cfg.delta));
  const double n = static_cast<double>(std::max<std::size_t>(1, stats.count_plus(x, a)));
  return std::sqrt(numer / n);
}

double bonus_scale(double lambda_max, double horizon) {
  // lambda / (1 - e^{-lambda H}) -> 1 / H as lambda -> 0.
  const double ratio = lambda_max > 0.0 ? lambda_max / -std::expm1(-lambda_max * horizon) : 1.0 / horizon;
  return std::max(ratio, 1.0);
}

double bonus(const VisitStatistics& stats, std::size_t x, std::size_t a, const ConfidenceConfig& cfg) {
  const double H = cfg.horizon;
  return bonus_scale(cfg.lambda_max, H) *
         (H * H * rate_width(stats, x, a, cfg) + H * transition_width(stats, x, a, cfg));
}

CtmdpModel optimistic_model(std::span<const double> reward, std::size_t initial_state, const VisitStatistics& stats,
                            const ConfidenceConfig& cfg, std::vector<double>* bonus_out) {
  const std::size_t S = stats.num_states();
  const std::size_t A = stats.num_actions();
  if (reward.size() != S * A) throw InvalidInput("optimistic_model: reward table has the wrong size");

  CtmdpModel m = CtmdpModel::zeros(S, A, cfg.horizon, initial_state, 0.0, cfg.lambda_max);
  m.augmented = true;
  if (bonus_out) bonus_out->assign(S * A, 0.0);
  for (std::size_t x = 0; x < S; ++x) {
    for (std::size_t a = 0; a < A; ++a) {
      const double b = bonus(stats, x, a, cfg);
      if (bonus_out) (*bonus_out)[m.pair(x, a)] = b;
      m.r(x, a) = reward[m.pair(x, a)] + b;
      m.lambda(x, a) = estimate_rate(stats, x, a, cfg.lambda_max);
      const auto p = empirical_transition(stats, x, a);
      std::copy(p.begin(), p.end(), m.p_row(x, a).begin());
    }
  }
  return m;
}

}  // namespace ctmdp
