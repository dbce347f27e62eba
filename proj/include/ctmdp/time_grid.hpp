#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ctmdp/error.hpp"

namespace ctmdp {

/// Uniform grid 0 = t_0 < t_1 < ... < t_N = H over remaining horizon.
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t num_cells);

  double horizon() const { return horizon_; }
  std::size_t num_cells() const { return num_cells_; }
  std::size_t num_nodes() const { return num_cells_ + 1; }
  double step() const { return step_; }

  /// t_i; node(num_cells()) is exactly the horizon.
  double node(std::size_t i) const;

  /// Index i of the cell [t_i, t_{i+1}) containing t. Values at or beyond
  /// the horizon map to the last cell, negative values to the first.
  std::size_t cell_of(double t) const;

  bool operator==(const TimeGrid& other) const {
    return horizon_ == other.horizon_ && num_cells_ == other.num_cells_;
  }

 private:
  double horizon_;
  std::size_t num_cells_;
  double step_;
};

/// V(x, t_i) for every state and grid node, stored state-major.
class GridValueFunction {
 public:
  GridValueFunction(TimeGrid grid, std::size_t num_states);

  const TimeGrid& grid() const { return grid_; }
  std::size_t num_states() const { return num_states_; }

  double& at(std::size_t x, std::size_t i) { return values_[x * grid_.num_nodes() + i]; }
  double at(std::size_t x, std::size_t i) const { return values_[x * grid_.num_nodes() + i]; }

  std::span<double> row(std::size_t x) {
    return {values_.data() + x * grid_.num_nodes(), grid_.num_nodes()};
  }
  std::span<const double> row(std::size_t x) const {
    return {values_.data() + x * grid_.num_nodes(), grid_.num_nodes()};
  }

  /// Value at remaining horizon t by linear interpolation between nodes.
  double interpolate(std::size_t x, double t) const;

  /// Value at (x, H).
  double at_horizon(std::size_t x) const { return at(x, grid_.num_cells()); }

 private:
  TimeGrid grid_;
  std::size_t num_states_;
  std::vector<double> values_;
};

/// Sup norm of the difference over all states and grid nodes.
double sup_distance(const GridValueFunction& a, const GridValueFunction& b);

/// Action per (state, grid node). Entry i applies while the remaining
/// horizon lies in [t_i, t_{i+1}).
class GridPolicy {
 public:
  GridPolicy(TimeGrid grid, std::size_t num_states, std::size_t initial_action = 0);

  const TimeGrid& grid() const { return grid_; }
  std::size_t num_states() const { return num_states_; }

  std::size_t& at(std::size_t x, std::size_t i) { return actions_[x * grid_.num_nodes() + i]; }
  std::size_t at(std::size_t x, std::size_t i) const { return actions_[x * grid_.num_nodes() + i]; }

  /// Action for state x when the remaining horizon is h.
  std::size_t action(std::size_t x, double remaining) const { return at(x, grid_.cell_of(remaining)); }

  bool operator==(const GridPolicy& other) const = default;

 private:
  TimeGrid grid_;
  std::size_t num_states_;
  std::vector<std::size_t> actions_;
};

}  // namespace ctmdp
