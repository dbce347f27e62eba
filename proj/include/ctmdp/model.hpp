#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ctmdp {

/// Finite-horizon continuous-time MDP: reward rates r(x,a), holding-time
/// rates lambda(x,a), jump probabilities p(y|x,a), horizon H, start state x0.
///
/// Tables are dense and row-major in (x, a[, y]). `lambda_min` and
/// `lambda_max` are the declared rate bounds every true instance must honor.
/// An augmented model (empirical rates and transitions with reward plus
/// exploration bonus) may have rewards above 1, zero rates and all-zero
/// transition rows for unsampled pairs.
struct CtmdpModel {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::vector<double> reward;
  std::vector<double> rate;
  std::vector<double> transition;
  double horizon = 1.0;
  std::size_t initial_state = 0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool augmented = false;

  /// All-zero tables of the right shape.
  static CtmdpModel zeros(std::size_t num_states, std::size_t num_actions, double horizon,
                          std::size_t initial_state, double lambda_min, double lambda_max);

  std::size_t pair(std::size_t x, std::size_t a) const { return x * num_actions + a; }

  double r(std::size_t x, std::size_t a) const { return reward[pair(x, a)]; }
  double& r(std::size_t x, std::size_t a) { return reward[pair(x, a)]; }
  double lambda(std::size_t x, std::size_t a) const { return rate[pair(x, a)]; }
  double& lambda(std::size_t x, std::size_t a) { return rate[pair(x, a)]; }
  double p(std::size_t x, std::size_t a, std::size_t y) const { return transition[pair(x, a) * num_states + y]; }
  double& p(std::size_t x, std::size_t a, std::size_t y) { return transition[pair(x, a) * num_states + y]; }

  std::span<const double> p_row(std::size_t x, std::size_t a) const {
    return {transition.data() + pair(x, a) * num_states, num_states};
  }
  std::span<double> p_row(std::size_t x, std::size_t a) {
    return {transition.data() + pair(x, a) * num_states, num_states};
  }

  /// Generator entry: lambda(x,a) p(y|x,a) off the diagonal and
  /// -lambda(x,a) (1 - p(x|x,a)) on it, so every row sums to zero.
  double q(std::size_t x, std::size_t a, std::size_t y) const;

  bool operator==(const CtmdpModel&) const = default;
};

/// Every violated invariant, one human-readable line each. Empty means valid.
std::vector<std::string> validate_model(const CtmdpModel& m);

}  // namespace ctmdp
