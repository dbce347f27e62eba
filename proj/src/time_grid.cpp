#include "ctmdp/time_grid.hpp"

#include <algorithm>
#include <cmath>

namespace ctmdp {

TimeGrid::TimeGrid(double horizon, std::size_t num_cells)
    : horizon_(horizon), num_cells_(num_cells), step_(0.0) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidInput("time grid: horizon must be positive");
  if (num_cells == 0) throw InvalidInput("time grid: need at least one cell");
  step_ = horizon / static_cast<double>(num_cells);
}

double TimeGrid::node(std::size_t i) const {
  return i == num_cells_ ? horizon_ : step_ * static_cast<double>(i);
}

std::size_t TimeGrid::cell_of(double t) const {
  if (!(t > 0.0)) return 0;
  const auto i = static_cast<std::size_t>(std::floor(t / step_));
  return std::min(i, num_cells_ - 1);
}

GridValueFunction::GridValueFunction(TimeGrid grid, std::size_t num_states)
    : grid_(grid), num_states_(num_states), values_(num_states * grid.num_nodes(), 0.0) {}

double GridValueFunction::interpolate(std::size_t x, double t) const {
  if (t <= 0.0) return at(x, 0);
  if (t >= grid_.horizon()) return at_horizon(x);
  const std::size_t i = grid_.cell_of(t);
  const double frac = (t - grid_.node(i)) / grid_.step();
  return (1.0 - frac) * at(x, i) + frac * at(x, i + 1);
}

double sup_distance(const GridValueFunction& a, const GridValueFunction& b) {
  if (!(a.grid() == b.grid()) || a.num_states() != b.num_states()) throw GridMismatch();
  double gap = 0.0;
  for (std::size_t x = 0; x < a.num_states(); ++x) {
    auto ra = a.row(x);
    auto rb = b.row(x);
    for (std::size_t i = 0; i < ra.size(); ++i) gap = std::max(gap, std::abs(ra[i] - rb[i]));
  }
  return gap;
}

GridPolicy::GridPolicy(TimeGrid grid, std::size_t num_states, std::size_t initial_action)
    : grid_(grid), num_states_(num_states), actions_(num_states * grid.num_nodes(), initial_action) {}

}  // namespace ctmdp
