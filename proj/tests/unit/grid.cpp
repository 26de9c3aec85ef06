#include <catch_amalgamated.hpp>

#include <cmath>

#include "itolab/error.hpp"
#include "itolab/grid.hpp"

using namespace itolab;

TEST_CASE("uniform grid has equal spacing") {
  const TimeGrid g = make_grid(1.0, 4, GridKind::Uniform);
  CHECK(g.nodes() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(g.cells() == 4);
  CHECK(g.horizon() == 1.0);
}

TEST_CASE("geometric grid applies the recurrence toward T") {
  const TimeGrid g = make_grid(1.0, 3, GridKind::Geometric, 0.5);
  CHECK(g.nodes() == std::vector<double>{0.0, 0.5, 0.75, 1.0});
  CHECK(g.ratio() == 0.5);
}

TEST_CASE("long geometric grids stay strictly increasing") {
  for (double rho : {0.9, 0.5}) {
    const TimeGrid g = make_grid(1.0, 800, GridKind::Geometric, rho);
    REQUIRE(g.cells() == 800);
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(800) == 1.0);
    for (std::size_t k = 0; k < 800; ++k) REQUIRE(g.node(k) < g.node(k + 1));
    for (std::size_t k = 1; k + 1 < 800; ++k) {
      const double lhs = 1.0 - g.node(k + 1);
      const double rhs = rho * (1.0 - g.node(k));
      REQUIRE(std::abs(lhs - rhs) <= 1e-12);
    }
  }
}

TEST_CASE("geometric recurrence holds on a moderate grid") {
  const TimeGrid g = make_grid(2.0, 100, GridKind::Geometric, 0.95);
  for (std::size_t k = 0; k + 1 < 100; ++k) {
    CHECK(std::abs((2.0 - g.node(k + 1)) - 0.95 * (2.0 - g.node(k))) <= 1e-12);
  }
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(make_grid(1.0, 1, GridKind::Uniform), Error);
  CHECK_THROWS_AS(make_grid(0.0, 4, GridKind::Uniform), Error);
  CHECK_THROWS_AS(make_grid(-1.0, 4, GridKind::Uniform), Error);
  CHECK_THROWS_AS(make_grid(1.0, 4, GridKind::Geometric), Error);
  CHECK_THROWS_AS(make_grid(1.0, 4, GridKind::Geometric, 1.0), Error);
  CHECK_THROWS_AS(make_grid(1.0, 4, GridKind::Geometric, 0.0), Error);
  try {
    make_grid(1.0, 1, GridKind::Uniform);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
}

TEST_CASE("node lookup") {
  const TimeGrid g = make_grid(1.0, 4, GridKind::Uniform);
  CHECK(g.find_node(0.5) == 2);
  CHECK(g.find_node(0.5 + 1e-14) == 2);
  CHECK_FALSE(g.find_node(0.6).has_value());
  CHECK(g.node_at_or_below(0.6) == 2);
  CHECK(g.node_at_or_below(1.0) == 4);
  CHECK(parse_grid_kind("geometric") == GridKind::Geometric);
  CHECK_THROWS_AS(parse_grid_kind("log"), Error);
}
