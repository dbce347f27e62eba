#include <doctest.h>

#include "ctmdp/error.hpp"
#include "ctmdp/time_grid.hpp"

using namespace ctmdp;

TEST_CASE("grid nodes end exactly at the horizon") {
  const TimeGrid grid(0.7, 3);
  CHECK(grid.num_nodes() == 4);
  CHECK(grid.node(0) == 0.0);
  CHECK(grid.node(3) == 0.7);
  CHECK(grid.step() == doctest::Approx(0.7 / 3));
}

TEST_CASE("cell lookup clamps to the grid") {
  const TimeGrid grid(1.0, 4);
  CHECK(grid.cell_of(-1.0) == 0);
  CHECK(grid.cell_of(0.0) == 0);
  CHECK(grid.cell_of(0.25) == 1);
  CHECK(grid.cell_of(0.99) == 3);
  CHECK(grid.cell_of(1.0) == 3);
  CHECK(grid.cell_of(5.0) == 3);
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(TimeGrid(0.0, 4), InvalidInput);
  CHECK_THROWS_AS(TimeGrid(1.0, 0), InvalidInput);
}

TEST_CASE("interpolation is linear between nodes") {
  GridValueFunction v(TimeGrid(1.0, 2), 1);
  v.at(0, 0) = 0.0;
  v.at(0, 1) = 1.0;
  v.at(0, 2) = 3.0;
  CHECK(v.interpolate(0, 0.25) == doctest::Approx(0.5));
  CHECK(v.interpolate(0, 0.75) == doctest::Approx(2.0));
  CHECK(v.interpolate(0, 1.0) == 3.0);
  CHECK(v.at_horizon(0) == 3.0);
}

TEST_CASE("sup distance requires matching grids") {
  GridValueFunction a(TimeGrid(1.0, 2), 2);
  GridValueFunction b(TimeGrid(1.0, 2), 2);
  b.at(1, 2) = -0.5;
  CHECK(sup_distance(a, b) == 0.5);
  CHECK_THROWS_AS(sup_distance(a, GridValueFunction(TimeGrid(1.0, 3), 2)), GridMismatch);
  CHECK_THROWS_AS(sup_distance(a, GridValueFunction(TimeGrid(1.0, 2), 1)), GridMismatch);
}

TEST_CASE("policy lookup uses the cell containing the remaining horizon") {
  GridPolicy pi(TimeGrid(1.0, 4), 1);
  pi.at(0, 2) = 1;
  CHECK(pi.action(0, 0.5) == 1);
  CHECK(pi.action(0, 0.74) == 1);
  CHECK(pi.action(0, 0.75) == 0);
}
