#include "ctmdp/model.hpp"

#include <cmath>
#include <sstream>

namespace ctmdp {

namespace {

constexpr double kRowSumTolerance = 1e-12;

std::string pair_label(std::size_t x, std::size_t a) {
  std::ostringstream out;
  out << "(" << x << "," << a << ")";
  return out.str();
}

}  // namespace

CtmdpModel CtmdpModel::zeros(std::size_t num_states, std::size_t num_actions, double horizon,
                             std::size_t initial_state, double lambda_min, double lambda_max) {
  CtmdpModel m;
  m.num_states = num_states;
  m.num_actions = num_actions;
  m.reward.assign(num_states * num_actions, 0.0);
  m.rate.assign(num_states * num_actions, 0.0);
  m.transition.assign(num_states * num_actions * num_states, 0.0);
  m.horizon = horizon;
  m.initial_state = initial_state;
  m.lambda_min = lambda_min;
  m.lambda_max = lambda_max;
  return m;
}

double CtmdpModel::q(std::size_t x, std::size_t a, std::size_t y) const {
  if (x == y) return -lambda(x, a) * (1.0 - p(x, a, x));
  return lambda(x, a) * p(x, a, y);
}

std::vector<std::string> validate_model(const CtmdpModel& m) {
  std::vector<std::string> issues;
  auto report = [&issues](const auto&... parts) {
    std::ostringstream out;
    (out << ... << parts);
    issues.push_back(out.str());
  };

  if (m.num_states == 0) report("num_states must be positive");
  if (m.num_actions == 0) report("num_actions must be positive");
  const std::size_t pairs = m.num_states * m.num_actions;
  if (m.reward.size() != pairs) report("reward table has ", m.reward.size(), " entries, expected ", pairs);
  if (m.rate.size() != pairs) report("rate table has ", m.rate.size(), " entries, expected ", pairs);
  if (m.transition.size() != pairs * m.num_states)
    report("transition table has ", m.transition.size(), " entries, expected ", pairs * m.num_states);
  if (!issues.empty()) return issues;

  if (!(m.horizon > 0.0) || !std::isfinite(m.horizon)) report("horizon must be positive and finite, got ", m.horizon);
  if (m.initial_state >= m.num_states) report("initial_state ", m.initial_state, " out of range");
  if (!m.augmented && !(m.lambda_min > 0.0)) report("lambda_min must be > 0, got ", m.lambda_min);
  if (!(m.lambda_max >= m.lambda_min) || !std::isfinite(m.lambda_max))
    report("lambda_max must be finite and >= lambda_min, got ", m.lambda_max);

  // Augmented models carry empirical rates in [0, lambda_max].
  const double rate_floor = m.augmented ? 0.0 : m.lambda_min;
  for (std::size_t x = 0; x < m.num_states; ++x) {
    for (std::size_t a = 0; a < m.num_actions; ++a) {
      const double lam = m.lambda(x, a);
      if (!(lam >= rate_floor && lam <= m.lambda_max))
        report("rate ", pair_label(x, a), " = ", lam, " outside [", rate_floor, ", ", m.lambda_max, "]");
      const double rew = m.r(x, a);
      if (!(rew >= 0.0) || !std::isfinite(rew) || (!m.augmented && rew > 1.0))
        report("reward ", pair_label(x, a), " = ", rew, " outside [0, 1]");

      double sum = 0.0;
      bool negative = false;
      for (double prob : m.p_row(x, a)) {
        sum += prob;
        negative = negative || !(prob >= 0.0);
      }
      if (negative) report("transition row ", pair_label(x, a), " has a negative entry");
      const bool unit = std::abs(sum - 1.0) <= kRowSumTolerance;
      const bool empty_ok = m.augmented && sum == 0.0 && lam == 0.0;
      if (!unit && !empty_ok) report("transition row ", pair_label(x, a), " sums to ", sum);
    }
  }
  return issues;
}

}  // namespace ctmdp
