#include "ctmdp/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ctmdp {

namespace {

/// Exponential weights for one cell of width h and rate lambda. With u linear
/// on the cell, int_0^h lambda e^{-lambda s} u(t_{j+1} - s) ds equals
/// fresh * u_{j+1} + stale * u_j, and the part of the integral from beyond
/// the cell shrinks by `decay`.
struct CellKernel {
  double decay = 1.0;
  double fresh = 0.0;
  double stale = 0.0;

  CellKernel(double lambda, double h) {
    const double z = lambda * h;
    decay = std::exp(-z);
    const double mass = -std::expm1(-z);
    // stale = (1/h) int_0^h lambda s e^{-lambda s} ds = (1 - e^{-z})/z - e^{-z}
    if (z < 1e-3) {
      stale = z * (0.5 - z * (1.0 / 3.0 - z / 8.0));
    } else {
      stale = mass / z - decay;
    }
    fresh = mass - stale;
  }
};

/// int_0^t e^{-lambda s} ds
double expected_clipped_holding(double lambda, double t) {
  if (lambda == 0.0) return t;
  return -std::expm1(-lambda * t) / lambda;
}

/// Writes (T^a u)(x, t_i) for reward rate r_eff into `out`; `mix` is scratch.
void backup_pair(const CtmdpModel& m, const GridValueFunction& u, std::size_t x, std::size_t a, double r_eff,
                 std::span<double> mix, std::span<double> out) {
  const TimeGrid& grid = u.grid();
  const std::size_t nodes = grid.num_nodes();
  const double lam = m.lambda(x, a);

  for (std::size_t i = 0; i < nodes; ++i) out[i] = r_eff * expected_clipped_holding(lam, grid.node(i));
  if (lam == 0.0) return;

  std::fill(mix.begin(), mix.end(), 0.0);
  auto row = m.p_row(x, a);
  for (std::size_t y = 0; y < m.num_states; ++y) {
    const double prob = row[y];
    if (prob == 0.0) continue;
    auto uy = u.row(y);
    for (std::size_t i = 0; i < nodes; ++i) mix[i] += prob * uy[i];
  }

  const CellKernel k(lam, grid.step());
  double carry = 0.0;
  for (std::size_t j = 0; j + 1 < nodes; ++j) {
    carry = k.decay * carry + k.fresh * mix[j + 1] + k.stale * mix[j];
    out[j + 1] += carry;
  }
}

void require_same_shape(const CtmdpModel& m, const GridValueFunction& u) {
  if (u.num_states() != m.num_states) throw GridMismatch();
  if (std::abs(u.grid().horizon() - m.horizon) > 1e-12 * m.horizon) throw GridMismatch();
}

}  // namespace

std::vector<double> apply_bellman_action(const CtmdpModel& m, const GridValueFunction& u, std::size_t x,
                                         std::size_t a, std::optional<double> bonus) {
  require_same_shape(m, u);
  const std::size_t nodes = u.grid().num_nodes();
  std::vector<double> mix(nodes), out(nodes);
  backup_pair(m, u, x, a, m.r(x, a) + bonus.value_or(0.0), mix, out);
  return out;
}

GridValueFunction bellman_sweep(const CtmdpModel& m, const GridValueFunction& u, bool truncate) {
  require_same_shape(m, u);
  const TimeGrid& grid = u.grid();
  const std::size_t nodes = grid.num_nodes();
  GridValueFunction next(grid, m.num_states);
  std::vector<double> mix(nodes), q(nodes);

  for (std::size_t x = 0; x < m.num_states; ++x) {
    auto best = next.row(x);
    for (std::size_t a = 0; a < m.num_actions; ++a) {
      backup_pair(m, u, x, a, m.r(x, a), mix, q);
      if (a == 0) {
        std::copy(q.begin(), q.end(), best.begin());
      } else {
        for (std::size_t i = 0; i < nodes; ++i) best[i] = std::max(best[i], q[i]);
      }
    }
    if (truncate) {
      for (std::size_t i = 0; i < nodes; ++i) best[i] = std::min(best[i], grid.node(i));
    }
  }
  return next;
}

ValueIterationResult value_iteration(const CtmdpModel& m, const TimeGrid& grid, const ValueIterationOptions& opts) {
  if (!(opts.eps > 0.0)) throw InvalidInput("value_iteration: eps must be positive");
  if (m.augmented && !opts.truncate) throw InvalidInput("value_iteration: augmented models require truncation");
  if (std::abs(grid.horizon() - m.horizon) > 1e-12 * m.horizon) throw GridMismatch();

  GridValueFunction current(grid, m.num_states);
  double gap = 0.0;
  for (std::size_t n = 1; n <= opts.max_iters; ++n) {
    GridValueFunction next = bellman_sweep(m, current, opts.truncate);
    gap = sup_distance(next, current);
    current = std::move(next);
    if (gap < opts.eps) return {std::move(current), n, gap};
  }
  std::ostringstream msg;
  msg << "value_iteration: no convergence after " << opts.max_iters << " sweeps (gap " << gap << ")";
  throw ConvergenceError(msg.str(), std::move(current), gap, opts.max_iters);
}

GridPolicy extract_policy(const CtmdpModel& m, const GridValueFunction& v,
                          std::optional<std::span<const double>> bonus) {
  require_same_shape(m, v);
  if (bonus && bonus->size() != m.num_states * m.num_actions)
    throw InvalidInput("extract_policy: bonus must have one entry per state-action pair");

  const std::size_t nodes = v.grid().num_nodes();
  GridPolicy pi(v.grid(), m.num_states);
  std::vector<double> mix(nodes), q(nodes), best(nodes);

  for (std::size_t x = 0; x < m.num_states; ++x) {
    for (std::size_t a = 0; a < m.num_actions; ++a) {
      const double extra = bonus ? (*bonus)[m.pair(x, a)] : 0.0;
      backup_pair(m, v, x, a, m.r(x, a) + extra, mix, q);
      for (std::size_t i = 0; i < nodes; ++i) {
        // Strict comparison keeps the lowest index on ties.
        if (a == 0 || q[i] > best[i]) {
          best[i] = q[i];
          pi.at(x, i) = a;
        }
      }
    }
  }
  return pi;
}

GridValueFunction policy_evaluation(const CtmdpModel& m, const GridPolicy& pi, double eps, std::size_t max_iters) {
  if (!(eps > 0.0)) throw InvalidInput("policy_evaluation: eps must be positive");
  if (pi.num_states() != m.num_states) throw GridMismatch();
  if (std::abs(pi.grid().horizon() - m.horizon) > 1e-12 * m.horizon) throw GridMismatch();

  const TimeGrid& grid = pi.grid();
  const std::size_t nodes = grid.num_nodes();

  // Each state only needs the actions its policy row uses.
  std::vector<std::vector<std::size_t>> used(m.num_states);
  for (std::size_t x = 0; x < m.num_states; ++x) {
    std::vector<bool> seen(m.num_actions, false);
    for (std::size_t i = 0; i < nodes; ++i) {
      const std::size_t a = pi.at(x, i);
      if (a >= m.num_actions) throw InvalidInput("policy_evaluation: policy action out of range");
      seen[a] = true;
    }
    for (std::size_t a = 0; a < m.num_actions; ++a)
      if (seen[a]) used[x].push_back(a);
  }

  GridValueFunction current(grid, m.num_states);
  std::vector<double> mix(nodes), q(nodes);
  double gap = 0.0;
  for (std::size_t n = 0; n < max_iters; ++n) {
    GridValueFunction next(grid, m.num_states);
    for (std::size_t x = 0; x < m.num_states; ++x) {
      auto row = next.row(x);
      for (std::size_t a : used[x]) {
        backup_pair(m, current, x, a, m.r(x, a), mix, q);
        for (std::size_t i = 0; i < nodes; ++i)
          if (pi.at(x, i) == a) row[i] = q[i];
      }
    }
    gap = sup_distance(next, current);
    if (gap < eps) return current;
    current = std::move(next);
  }
  std::ostringstream msg;
  msg << "policy_evaluation: no convergence after " << max_iters << " sweeps (gap " << gap << ")";
  throw ConvergenceError(msg.str(), std::move(current), gap, max_iters);
}

GridValueFunction hjb_euler_solve(const CtmdpModel& m, const TimeGrid& grid, double dt) {
  if (m.augmented) throw InvalidInput("hjb_euler_solve: augmented models are not supported");
  if (!(dt > 0.0)) throw InvalidInput("hjb_euler_solve: dt must be positive");
  if (std::abs(grid.horizon() - m.horizon) > 1e-12 * m.horizon) throw GridMismatch();
  double rate_bound = m.lambda_max;
  for (double lam : m.rate) rate_bound = std::max(rate_bound, lam);
  if (rate_bound > 0.0 && dt > 1.0 / (2.0 * rate_bound)) {
    std::ostringstream msg;
    msg << "hjb_euler_solve: dt = " << dt << " violates the stability bound 1/(2 lambda_max) = "
        << 1.0 / (2.0 * rate_bound);
    throw InvalidInput(msg.str());
  }

  const std::size_t S = m.num_states;
  const auto steps = static_cast<std::size_t>(std::ceil(m.horizon / dt - 1e-9));
  const double h = m.horizon / static_cast<double>(steps);

  GridValueFunction out(grid, S);
  std::vector<double> v(S, 0.0), next(S, 0.0);
  std::size_t pending = 1;  // node 0 is already 0.
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t x = 0; x < S; ++x) {
      double best = 0.0;
      for (std::size_t a = 0; a < m.num_actions; ++a) {
        double drift = m.r(x, a) - m.lambda(x, a) * v[x];
        auto row = m.p_row(x, a);
        double mixed = 0.0;
        for (std::size_t z = 0; z < S; ++z) mixed += row[z] * v[z];
        drift += m.lambda(x, a) * mixed;
        if (a == 0 || drift > best) best = drift;
      }
      next[x] = v[x] + h * best;
    }

    const double t0 = h * static_cast<double>(k);
    const double t1 = k + 1 == steps ? m.horizon : h * static_cast<double>(k + 1);
    while (pending < grid.num_nodes() && grid.node(pending) <= t1 + 1e-12 * m.horizon) {
      const double frac = std::clamp((grid.node(pending) - t0) / (t1 - t0), 0.0, 1.0);
      for (std::size_t x = 0; x < S; ++x) out.at(x, pending) = (1.0 - frac) * v[x] + frac * next[x];
      ++pending;
    }
    v.swap(next);
  }
  return out;
}

}  // namespace ctmdp
