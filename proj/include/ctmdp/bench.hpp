#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ctmdp/model.hpp"

namespace ctmdp {

/// Two-state machine operation/repair problem with rewards rescaled to
/// [0, 1]. State 0 = operating, 1 = under repair; action 0 = slow, 1 = fast.
CtmdpModel machine_repair_instance();

/// One absorbing state with a single action of reward rate `reward`.
CtmdpModel single_absorbing_instance(double reward = 1.0, double rate = 1.0, double horizon = 1.0);

/// Parameters of the tree-structured lower-bound family. States 0..S-3
/// form a full A-ary tree in heap order (children of i are A i + 1 .. A i + A),
/// S-2 is the rewarding absorbing state, S-1 the other absorbing state.
/// Leaf-action pairs are numbered 1..L A in leaf order times action index;
/// pair 0 means "no perturbed pair".
struct HardInstanceParams {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::size_t depth = 0;
  std::size_t num_leaves = 0;
  std::size_t num_episodes = 0;
  double lambda_max = 1.0;
  double horizon = 1.0;
  std::size_t perturbed_pair = 0;
  double gap = 0.0;

  std::size_t good_state() const { return num_states - 2; }
  std::size_t bad_state() const { return num_states - 1; }
  std::size_t first_leaf() const { return num_states - 2 - num_leaves; }
  /// Leaf state and action of pair j >= 1.
  std::size_t pair_state(std::size_t j) const { return first_leaf() + (j - 1) / num_actions; }
  std::size_t pair_action(std::size_t j) const { return (j - 1) % num_actions; }
};

/// d with S = 2 + (A^d - 1)/(A - 1), or nullopt.
std::optional<std::size_t> tree_depth(std::size_t num_states, std::size_t num_actions);

/// Valid S >= 6 for this A closest to `near` (both neighbours on a tie).
std::vector<std::size_t> nearest_valid_states(std::size_t num_states, std::size_t num_actions);

/// Checks S >= 6, A >= 2 and the tree identity, then fills depth and leaf
/// count. `gap` defaults to the calibrated value for `num_episodes`.
HardInstanceParams make_hard_params(std::size_t num_states, std::size_t num_actions, std::size_t num_episodes,
                                    double lambda_max, double horizon, std::size_t perturbed_pair,
                                    std::optional<double> gap = std::nullopt);

CtmdpModel hard_instance(const HardInstanceParams& params);

/// (1 / (2 sqrt 2)) (1 - 1/(L A)) sqrt(L A / K); requires K >= S A / 2 and a
/// result no larger than 1/4.
double delta_calibration(std::size_t num_leaves, std::size_t num_actions, std::size_t num_episodes);

/// E[(H - gamma)^+] for gamma ~ Erlang(shape d, rate lambda), in closed form.
double erlang_truncated_mean(std::size_t shape, double rate, double horizon);

/// (1 / (12 sqrt 2)) E[(H - gamma_d)^+] sqrt(S A K)
double lower_bound_value(std::size_t num_states, std::size_t num_actions, std::size_t num_episodes,
                         std::size_t depth, double lambda_max, double horizon);

/// Expected regret of a play strategy on the perturbed instance given the
/// fraction of episodes that hit the perturbed pair:
/// K E[(H - gamma_d)^+] gap (1 - hit_rate).
double lower_bound_regret_identity(const HardInstanceParams& params, double hit_rate);

struct Theorem1Terms {
  /// 3 (C H + 1) sqrt(S A K) (H + 1/lambda_min) (lambda_max H + 1) ln K / ln(ln K + 1)
  ///   * (sqrt(2 S + 6 ln(2 S A K H)) + 4 lambda_max H sqrt(ln(2 S A K H)))
  double leading = 0.0;
  /// sum_k eps_k e^{lambda_max H} + 1
  double tail = 0.0;
  double total() const { return leading + tail; }
};

/// Literal evaluation given the precomputed sum of eps_k. At K = 1 the factor
/// ln K / ln(ln K + 1) is 0/0 and is replaced by its limit 1; this overload
/// does not reject that case.
Theorem1Terms theorem1_terms(std::size_t num_states, std::size_t num_actions, std::size_t num_episodes,
                             double horizon, double lambda_min, double lambda_max, double eps_sum);

/// Upper regret bound for K >= 2 with eps_k supplied per episode index.
double theorem1_bound(std::size_t num_states, std::size_t num_actions, std::size_t num_episodes, double horizon,
                      double lambda_min, double lambda_max, const std::function<double(std::size_t)>& eps);

}  // namespace ctmdp
