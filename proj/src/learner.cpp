#include "ctmdp/learner.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "ctmdp/bellman.hpp"
#include "ctmdp/error.hpp"

namespace ctmdp {

EpsSchedule EpsSchedule::parse(const std::string& spec) {
  if (spec == "sqrt") return sqrt();
  const std::string prefix = "corollary:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string rest = spec.substr(prefix.size());
    std::size_t used = 0;
    double alpha = 0.0;
    try {
      alpha = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rest.size() || !(alpha > 0.0))
      throw InvalidInput("eps schedule: bad alpha in '" + spec + "'");
    return corollary(alpha);
  }
  throw InvalidInput("eps schedule: expected 'sqrt' or 'corollary:<alpha>', got '" + spec + "'");
}

double EpsSchedule::operator()(std::size_t k, double lambda_max, double horizon) const {
  const double kk = static_cast<double>(k);
  if (kind == Kind::Sqrt) return 1.0 / std::sqrt(kk);
  return std::pow(kk, -alpha) * std::exp(-lambda_max * horizon);
}

std::string EpsSchedule::to_string() const {
  if (kind == Kind::Sqrt) return "sqrt";
  std::ostringstream out;
  out << "corollary:" << alpha;
  return out.str();
}

KnownModel known_part(const CtmdpModel& m) {
  return {m.num_states, m.num_actions, m.horizon, m.initial_state, m.reward};
}

LearnerRun ct_ucbvi_run(const KnownModel& known, Environment& env, const LearnerConfig& cfg,
                        const LearnerHooks& hooks) {
  ConfidenceConfig conf{cfg.delta, cfg.num_episodes, known.horizon, cfg.lambda_max, known.num_states,
                        known.num_actions};
  conf.validate();
  if (known.reward.size() != known.num_states * known.num_actions)
    throw InvalidInput("learner: reward table has the wrong size");

  const TimeGrid grid(known.horizon, cfg.grid_cells);
  LearnerRun run{{}, VisitStatistics(known.num_states, known.num_actions, known.horizon)};
  run.logs.reserve(cfg.num_episodes);

  for (std::size_t k = 1; k <= cfg.num_episodes; ++k) {
    if (hooks.on_episode_start) hooks.on_episode_start(k, run.statistics);

    std::vector<double> bonus_values;
    const CtmdpModel optimistic =
        optimistic_model(known.reward, known.initial_state, run.statistics, conf, &bonus_values);

    EpisodeLog log;
    log.k = k;
    log.eps = cfg.eps(k, cfg.lambda_max, known.horizon);

    ValueIterationResult solved = [&] {
      try {
        return value_iteration(optimistic, grid, {log.eps, true, cfg.vi_max_iters});
      } catch (const ConvergenceError& err) {
        std::ostringstream msg;
        msg << "learner: episode " << k << " (run " << cfg.run << "): " << err.what();
        throw ConvergenceError(msg.str(), err.last_iterate(), err.gap(), err.iterations());
      }
    }();
    log.vi_iterations = solved.iterations;
    log.optimistic_value = solved.values.at_horizon(known.initial_state);

    // The bonus is already part of the optimistic model's reward.
    const GridPolicy pi = extract_policy(optimistic, solved.values);
    const EpisodeTrajectory traj = env.run_episode(pi, RngSeed::for_episode(cfg.seed, cfg.run, k));
    log.realized_reward = traj.reward;
    log.policy_value = hooks.evaluate ? hooks.evaluate(pi) : std::numeric_limits<double>::quiet_NaN();
    if (cfg.keep_bonus) log.bonus_snapshot = std::move(bonus_values);

    run.statistics.record(traj);
    if (hooks.on_trajectory) hooks.on_trajectory(k, traj);
    run.logs.push_back(std::move(log));
  }
  return run;
}

PolicyValueFn cached_policy_value(const CtmdpModel& model, double eps) {
  struct Cache {
    std::optional<GridPolicy> policy;
    double value = 0.0;
  };
  auto cache = std::make_shared<Cache>();
  return [model, eps, cache](const GridPolicy& pi) {
    if (cache->policy && *cache->policy == pi) return cache->value;
    const GridValueFunction v = policy_evaluation(model, pi, eps);
    cache->policy = pi;
    cache->value = v.at_horizon(model.initial_state);
    return cache->value;
  };
}

LearnerRun ct_ucbvi_run(const CtmdpModel& true_model, const LearnerConfig& cfg, LearnerHooks hooks) {
  SimulatedEnvironment env(true_model);
  if (!hooks.evaluate) hooks.evaluate = cached_policy_value(true_model, cfg.eval_eps);
  return ct_ucbvi_run(known_part(true_model), env, cfg, hooks);
}

std::vector<double> cumulative_regret(const std::vector<EpisodeLog>& logs, double v_star) {
  std::vector<double> out;
  out.reserve(logs.size());
  double total = 0.0;
  for (const auto& log : logs) {
    total += v_star - log.policy_value;
    out.push_back(total);
  }
  return out;
}

}  // namespace ctmdp
