#include "ctmdp/bench.hpp"

#include <cmath>
#include <sstream>

#include "ctmdp/error.hpp"

namespace ctmdp {

namespace {

/// 2 + 1 + A + ... + A^{d-1}
std::size_t tree_states(std::size_t num_actions, std::size_t depth) {
  std::size_t total = 2, level = 1;
  for (std::size_t i = 0; i < depth; ++i) {
    total += level;
    level *= num_actions;
  }
  return total;
}

void require_episodes(std::size_t num_states, std::size_t num_actions, std::size_t num_episodes) {
  if (2 * num_episodes < num_states * num_actions) {
    std::ostringstream msg;
    msg << "K = " << num_episodes << " violates K >= SA/2 = " << static_cast<double>(num_states * num_actions) / 2.0;
    throw InvalidInput(msg.str());
  }
}

void require_tree(std::size_t num_states, std::size_t num_actions) {
  if (num_actions < 2 || num_states < 6 || !tree_depth(num_states, num_actions)) {
    std::ostringstream msg;
    msg << "S = " << num_states << ", A = " << num_actions
        << " violates S >= 6, A >= 2, S = 2 + (A^d - 1)/(A - 1) for an integer d";
    if (num_actions >= 2) {
      msg << "; nearest valid S:";
      for (std::size_t s : nearest_valid_states(num_states, num_actions)) msg << ' ' << s;
    }
    throw InvalidInput(msg.str());
  }
}

/// P(N >= n) for N ~ Poisson(mean).
double poisson_upper_tail(double mean, std::size_t n) {
  if (n == 0) return 1.0;
  if (mean == 0.0) return 0.0;
  auto pmf = [mean](std::size_t j) {
    const double jj = static_cast<double>(j);
    return std::exp(-mean + jj * std::log(mean) - std::lgamma(jj + 1.0));
  };
  if (static_cast<double>(n) <= mean) {
    double head = 0.0;
    for (std::size_t j = 0; j < n; ++j) head += pmf(j);
    return std::max(0.0, 1.0 - head);
  }
  double tail = 0.0;
  for (std::size_t j = n;; ++j) {
    const double term = pmf(j);
    tail += term;
    if (term <= 1e-18 * tail || j > n + 10000) break;
  }
  return tail;
}

}  // namespace

CtmdpModel machine_repair_instance() {
  CtmdpModel m = CtmdpModel::zeros(2, 2, 1.0, 0, 2.0, 7.0);
  m.r(0, 0) = 17.0 / 20.0;
  m.r(0, 1) = 1.0;
  m.r(1, 0) = 8.0 / 20.0;
  m.r(1, 1) = 0.0;
  m.lambda(0, 0) = 3.0;
  m.lambda(0, 1) = 5.0;
  m.lambda(1, 0) = 2.0;
  m.lambda(1, 1) = 7.0;
  for (std::size_t a = 0; a < 2; ++a) {
    m.p(0, a, 1) = 1.0;
    m.p(1, a, 0) = 1.0;
  }
  return m;
}

CtmdpModel single_absorbing_instance(double reward, double rate, double horizon) {
  CtmdpModel m = CtmdpModel::zeros(1, 1, horizon, 0, rate, rate);
  m.r(0, 0) = reward;
  m.lambda(0, 0) = rate;
  m.p(0, 0, 0) = 1.0;
  return m;
}

std::optional<std::size_t> tree_depth(std::size_t num_states, std::size_t num_actions) {
  if (num_actions < 2) return std::nullopt;
  for (std::size_t d = 1;; ++d) {
    const std::size_t s = tree_states(num_actions, d);
    if (s == num_states) return d;
    if (s > num_states) return std::nullopt;
  }
}

std::vector<std::size_t> nearest_valid_states(std::size_t num_states, std::size_t num_actions) {
  std::size_t below = 0, above = 0;
  for (std::size_t d = 1;; ++d) {
    const std::size_t s = tree_states(num_actions, d);
    if (s < 6) continue;
    if (s <= num_states) below = s;
    if (s >= num_states) {
      above = s;
      break;
    }
  }
  if (below == 0 || below == above) return {above};
  const std::size_t gap_below = num_states - below, gap_above = above - num_states;
  if (gap_below < gap_above) return {below};
  if (gap_above < gap_below) return {above};
  return {below, above};
}

HardInstanceParams make_hard_params(std::size_t num_states, std::size_t num_actions, std::size_t num_episodes,
                                    double lambda_max, double horizon, std::size_t perturbed_pair,
                                    std::optional<double> gap) {
  require_tree(num_states, num_actions);
  HardInstanceParams p;
  p.num_states = num_states;
  p.num_actions = num_actions;
  p.depth = *tree_depth(num_states, num_actions);
  p.num_leaves = 1;
  for (std::size_t i = 1; i < p.depth; ++i) p.num_leaves *= num_actions;
  p.num_episodes = num_episodes;
  p.lambda_max = lambda_max;
  p.horizon = horizon;
  p.perturbed_pair = perturbed_pair;
  if (!(lambda_max > 0.0)) throw InvalidInput("hard instance: lambda_max must be positive");
  if (!(horizon > 0.0)) throw InvalidInput("hard instance: horizon must be positive");
  if (perturbed_pair > p.num_leaves * num_actions) {
    std::ostringstream msg;
    msg << "hard instance: perturbed pair " << perturbed_pair << " outside 0.." << p.num_leaves * num_actions;
    throw InvalidInput(msg.str());
  }
  p.gap = gap ? *gap : delta_calibration(p.num_leaves, num_actions, num_episodes);
  if (!(p.gap >= 0.0 && p.gap <= 0.25)) throw InvalidInput("hard instance: gap must lie in [0, 1/4]");
  return p;
}

CtmdpModel hard_instance(const HardInstanceParams& params) {
  const std::size_t S = params.num_states, A = params.num_actions;
  require_tree(S, A);
  if (tree_depth(S, A) != params.depth) throw InvalidInput("hard instance: depth inconsistent with S and A");

  // The leaf count must also satisfy L = 1/A + (1 - 1/A)(S - 2).
  const double leaves_identity = 1.0 / static_cast<double>(A) + (1.0 - 1.0 / static_cast<double>(A)) * (S - 2.0);
  if (std::abs(leaves_identity - static_cast<double>(params.num_leaves)) > 1e-9)
    throw InvalidInput("hard instance: leaf count inconsistent with S and A");

  CtmdpModel m = CtmdpModel::zeros(S, A, params.horizon, 0, params.lambda_max, params.lambda_max);
  m.rate.assign(S * A, params.lambda_max);
  const std::size_t good = params.good_state(), bad = params.bad_state(), first_leaf = params.first_leaf();
  for (std::size_t x = 0; x < first_leaf; ++x)
    for (std::size_t a = 0; a < A; ++a) m.p(x, a, A * x + 1 + a) = 1.0;
  for (std::size_t x = first_leaf; x < good; ++x) {
    for (std::size_t a = 0; a < A; ++a) {
      const std::size_t j = (x - first_leaf) * A + a + 1;
      const double eps = j == params.perturbed_pair ? params.gap : 0.0;
      m.p(x, a, good) = 0.5 + eps;
      m.p(x, a, bad) = 0.5 - eps;
    }
  }
  for (std::size_t a = 0; a < A; ++a) {
    m.p(good, a, good) = 1.0;
    m.p(bad, a, bad) = 1.0;
    m.r(good, a) = 1.0;
  }
  return m;
}

double delta_calibration(std::size_t num_leaves, std::size_t num_actions, std::size_t num_episodes) {
  if (num_leaves == 0 || num_actions < 2) throw InvalidInput("delta calibration: need L >= 1 and A >= 2");
  // Recover S from L = 1/A + (1 - 1/A)(S - 2).
  const double A = static_cast<double>(num_actions);
  const double S = 2.0 + (static_cast<double>(num_leaves) - 1.0 / A) / (1.0 - 1.0 / A);
  if (2.0 * static_cast<double>(num_episodes) < S * A) {
    std::ostringstream msg;
    msg << "K = " << num_episodes << " violates K >= SA/2 = " << S * A / 2.0;
    throw InvalidInput(msg.str());
  }
  const double LA = static_cast<double>(num_leaves) * A;
  const double gap = (1.0 / (2.0 * std::sqrt(2.0))) * (1.0 - 1.0 / LA) * std::sqrt(LA / static_cast<double>(num_episodes));
  if (gap > 0.25) {
    std::ostringstream msg;
    msg << "delta calibration: gap " << gap << " exceeds 1/4 at K = " << num_episodes << "; increase K";
    throw InvalidInput(msg.str());
  }
  return gap;
}

double erlang_truncated_mean(std::size_t shape, double rate, double horizon) {
  if (shape == 0) throw InvalidInput("erlang_truncated_mean: shape must be >= 1");
  if (!(rate > 0.0)) throw InvalidInput("erlang_truncated_mean: rate must be positive");
  if (!(horizon >= 0.0)) throw InvalidInput("erlang_truncated_mean: horizon must be >= 0");
  if (horizon == 0.0) return 0.0;
  // int_0^H P(gamma <= t) dt = H P(N >= d) - (d / lambda) P(N >= d + 1), N ~ Poisson(lambda H).
  const double mean = rate * horizon;
  const double value = horizon * poisson_upper_tail(mean, shape) -
                       static_cast<double>(shape) / rate * poisson_upper_tail(mean, shape + 1);
  return std::max(0.0, value);
}

double lower_bound_value(std::size_t num_states, std::size_t num_actions, std::size_t num_episodes,
                         std::size_t depth, double lambda_max, double horizon) {
  require_tree(num_states, num_actions);
  if (tree_depth(num_states, num_actions) != depth) throw InvalidInput("lower bound: depth inconsistent with S and A");
  require_episodes(num_states, num_actions, num_episodes);
  const double SAK = static_cast<double>(num_states * num_actions * num_episodes);
  return erlang_truncated_mean(depth, lambda_max, horizon) * std::sqrt(SAK) / (12.0 * std::sqrt(2.0));
}

double lower_bound_regret_identity(const HardInstanceParams& params, double hit_rate) {
  if (!(hit_rate >= 0.0 && hit_rate <= 1.0)) throw InvalidInput("lower bound identity: hit rate must lie in [0, 1]");
  return static_cast<double>(params.num_episodes) *
         erlang_truncated_mean(params.depth, params.lambda_max, params.horizon) * params.gap * (1.0 - hit_rate);
}

Theorem1Terms theorem1_terms(std::size_t num_states, std::size_t num_actions, std::size_t num_episodes,
                             double horizon, double lambda_min, double lambda_max, double eps_sum) {
  if (num_episodes == 0) throw InvalidInput("theorem1 bound: K must be positive");
  if (!(lambda_min > 0.0) || !(lambda_max >= lambda_min)) throw InvalidInput("theorem1 bound: need 0 < lambda_min <= lambda_max");
  const double S = static_cast<double>(num_states), A = static_cast<double>(num_actions);
  const double K = static_cast<double>(num_episodes), H = horizon;
  const double C = std::max(lambda_max / -std::expm1(-lambda_max * H), 1.0);
  const double log_term = std::log(2.0 * S * A * K * H);
  const double lnK = std::log(K);

  // ln K / ln(ln K + 1) is 0/0 at K = 1; use its limit u / ln(1 + u) -> 1.
  const double log_ratio = num_episodes == 1 ? 1.0 : lnK / std::log1p(lnK);

  Theorem1Terms t;
  t.leading = 3.0 * (C * H + 1.0) * std::sqrt(S * A * K) * (H + 1.0 / lambda_min) * (lambda_max * H + 1.0) *
              log_ratio * (std::sqrt(2.0 * S + 6.0 * log_term) + 4.0 * lambda_max * H * std::sqrt(log_term));
  t.tail = eps_sum * std::exp(lambda_max * H) + 1.0;
  return t;
}

double theorem1_bound(std::size_t num_states, std::size_t num_actions, std::size_t num_episodes, double horizon,
                      double lambda_min, double lambda_max, const std::function<double(std::size_t)>& eps) {
  if (num_episodes < 2) throw InvalidInput("theorem1 bound: requires K >= 2");
  double eps_sum = 0.0;
  for (std::size_t k = 1; k <= num_episodes; ++k) eps_sum += eps(k);
  return theorem1_terms(num_states, num_actions, num_episodes, horizon, lambda_min, lambda_max, eps_sum).total();
}

}  // namespace ctmdp
