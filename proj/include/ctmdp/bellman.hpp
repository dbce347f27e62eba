#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ctmdp/error.hpp"
#include "ctmdp/model.hpp"
#include "ctmdp/time_grid.hpp"

namespace ctmdp {

/// (T^a u)(x, t_i) at every grid node:
///
///   r_eff * int_0^t e^{-lambda s} ds + sum_y p(y|x,a) int_0^t lambda e^{-lambda s} u(y, t - s) ds
///
/// with r_eff = r(x,a) + bonus. The continuation integral treats u as linear
/// between grid nodes and uses exact exponential moments per cell, evaluated
/// by an O(N) recursion. lambda = 0 gives r_eff * t and no continuation.
std::vector<double> apply_bellman_action(const CtmdpModel& m, const GridValueFunction& u, std::size_t x,
                                         std::size_t a, std::optional<double> bonus = std::nullopt);

/// One value-iteration sweep u -> max_a T^a u, optionally followed by
/// min{t, .}.
GridValueFunction bellman_sweep(const CtmdpModel& m, const GridValueFunction& u, bool truncate);

struct ValueIterationOptions {
  double eps = 1e-6;
  bool truncate = false;
  std::size_t max_iters = 100000;
};

struct ValueIterationResult {
  GridValueFunction values;
  std::size_t iterations = 0;
  /// ||V_n - V_{n-1}|| at the returned iterate.
  double last_gap = 0.0;
};

/// Raised when an iterative solver hits its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, GridValueFunction last, double gap, std::size_t iterations)
      : Error(what), last_(std::move(last)), gap_(gap), iterations_(iterations) {}

  const GridValueFunction& last_iterate() const { return last_; }
  double gap() const { return gap_; }
  std::size_t iterations() const { return iterations_; }

 private:
  GridValueFunction last_;
  double gap_;
  std::size_t iterations_;
};

/// V_{n+1} = max_a T^a V_n from V_0 = 0 (clipped by t when truncating)
/// until the sup-norm change over grid nodes drops below eps. Returns the
/// last iterate V_n. Augmented models must be solved with truncation.
ValueIterationResult value_iteration(const CtmdpModel& m, const TimeGrid& grid, const ValueIterationOptions& opts);

/// Greedy policy: argmax_a (T^a v)(x, t_i) per node, lowest index on ties.
/// `bonus`, when given, holds one extra reward rate per pair (x * A + a).
GridPolicy extract_policy(const CtmdpModel& m, const GridValueFunction& v,
                          std::optional<std::span<const double>> bonus = std::nullopt);

/// Fixed point of u -> T^pi u from u_0 = 0, stopping when
/// ||u_{n+1} - u_n|| < eps and returning u_n.
GridValueFunction policy_evaluation(const CtmdpModel& m, const GridPolicy& pi, double eps,
                                    std::size_t max_iters = 100000);

/// Explicit Euler march of the HJB system
///
///   dv(x,t)/dt = max_a [ r(x,a) - lambda(x,a) v(x,t) + lambda(x,a) sum_z p(z|x,a) v(z,t) ],  v(., 0) = 0
///
/// resampled onto `grid` by linear interpolation. Used as a cross-check.
/// dt is shrunk so that H/dt is an integer number of steps.
GridValueFunction hjb_euler_solve(const CtmdpModel& m, const TimeGrid& grid, double dt);

}  // namespace ctmdp
