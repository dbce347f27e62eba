#include "ctmdp/simulator.hpp"

#include <cmath>
#include <ostream>

#include "ctmdp/format.hpp"

namespace ctmdp {

std::vector<double> EpisodeTrajectory::jump_times() const {
  std::vector<double> times;
  times.reserve(segments.size());
  double t = 0.0;
  for (const auto& seg : segments) {
    times.push_back(t);
    t += seg.holding;
  }
  return times;
}

EpisodeTrajectory sample_episode(const CtmdpModel& m, const ActionRule& rule, StreamRng& rng) {
  EpisodeTrajectory traj;
  const double H = m.horizon;
  std::size_t x = m.initial_state;
  double t = 0.0;
  while (true) {
    const double remaining = H - t;
    const std::size_t a = rule(x, remaining);
    const double tau = rng.exponential(m.lambda(x, a));
    // A jump landing exactly on H is treated as clipped: nothing after H is observed.
    if (tau >= remaining) {
      traj.segments.push_back({x, a, remaining});
      traj.reward += m.r(x, a) * remaining;
      traj.truncated = true;
      break;
    }
    traj.segments.push_back({x, a, tau});
    traj.reward += m.r(x, a) * tau;
    t += tau;
    x = rng.categorical(m.p_row(x, a));
  }
  return traj;
}

EpisodeTrajectory sample_episode(const CtmdpModel& m, const GridPolicy& pi, RngSeed seed) {
  StreamRng rng(seed);
  return sample_episode(m, [&pi](std::size_t x, double remaining) { return pi.action(x, remaining); }, rng);
}

MonteCarloEstimate mean_episode_reward(const CtmdpModel& m, const GridPolicy& pi, std::size_t runs,
                                       std::uint64_t seed) {
  MonteCarloEstimate est;
  est.runs = runs;
  if (runs == 0) return est;
  // Welford accumulation.
  double mean = 0.0, m2 = 0.0;
  for (std::size_t e = 0; e < runs; ++e) {
    const double value = sample_episode(m, pi, RngSeed{seed, e}).reward;
    const double delta = value - mean;
    mean += delta / static_cast<double>(e + 1);
    m2 += delta * (value - mean);
  }
  est.mean = mean;
  if (runs > 1) est.std_error = std::sqrt(m2 / static_cast<double>(runs - 1) / static_cast<double>(runs));
  return est;
}

void write_trajectory_header(std::ostream& out) { out << "episode,step,state,action,holding,truncated\n"; }

void write_trajectory_rows(std::ostream& out, std::size_t episode, const EpisodeTrajectory& traj) {
  for (std::size_t n = 0; n < traj.segments.size(); ++n) {
    const auto& seg = traj.segments[n];
    const bool clipped = traj.truncated && n + 1 == traj.segments.size();
    out << episode << ',' << n << ',' << seg.state << ',' << seg.action << ',' << format_number(seg.holding) << ','
        << (clipped ? 1 : 0) << '\n';
  }
}

}  // namespace ctmdp
