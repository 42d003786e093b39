#include <doctest.h>

#include <random>
#include <stdexcept>

#include "cb2/game_map.hpp"
#include "cb2/hexgrid.hpp"
#include "unit/oracles.hpp"

using namespace cb2;

TEST_CASE("neighbor uses the fixed direction table") {
  CHECK(neighbor({0, 0}, Heading(0)) == HexCoord{1, 0});
  CHECK(neighbor({2, 3}, Heading(3)) == HexCoord{1, 3});
  CHECK(neighbor({0, 0}, Heading(5)) == HexCoord{0, 1});
}

TEST_CASE("rotate wraps modulo six") {
  CHECK(rotate(Heading(0), Turn::Left) == Heading(1));
  CHECK(rotate(Heading(0), Turn::Right) == Heading(5));
  CHECK(rotate(Heading(3), Turn::Left) == Heading(4));
  for (int h = 0; h < 6; ++h) {
    for (Turn t : {Turn::Left, Turn::Right}) {
      Heading x(h);
      for (int i = 0; i < 6; ++i) x = rotate(x, t);
      CHECK(x == Heading(h));
    }
  }
}

TEST_CASE("neighbor and opposite heading cancel") {
  for (int q = -3; q <= 3; ++q) {
    for (int r = -3; r <= 3; ++r) {
      for (int h = 0; h < 6; ++h) {
        const HexCoord c{q, r};
        CHECK(neighbor(neighbor(c, Heading(h)), Heading(h).opposite()) == c);
      }
    }
  }
}

TEST_CASE("distance examples") {
  CHECK(distance({0, 0}, {0, 0}) == 0);
  CHECK(distance({0, 0}, {1, 0}) == 1);
  CHECK(oracle::bfs_distance({0, 0}, {2, -1}) == 2);
  CHECK(distance({0, 0}, {2, -1}) == 2);
}

TEST_CASE("distance agrees with BFS and is a metric") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coord(-6, 6);
  for (int i = 0; i < 300; ++i) {
    HexCoord a{coord(rng), coord(rng)};
    HexCoord b{coord(rng), coord(rng)};
    CHECK(distance(a, b) == oracle::bfs_distance(a, b));
  }
  std::uniform_int_distribution<int> wide(-1000, 1000);
  for (int i = 0; i < 10000; ++i) {
    HexCoord a{wide(rng), wide(rng)};
    HexCoord b{wide(rng), wide(rng)};
    HexCoord c{wide(rng), wide(rng)};
    REQUIRE(distance(a, b) == distance(b, a));
    REQUIRE(distance(a, c) <= distance(a, b) + distance(b, c));
  }
}

TEST_CASE("map bounds form an offset rectangle") {
  GameMap m(4, 5);
  CHECK(m.cell_count() == 20);
  int n = 0;
  for (HexCoord c : m.cells()) {
    CHECK(m.in_bounds(c));
    CHECK(m.cell_at(m.index_of(c)) == c);
    ++n;
  }
  CHECK(n == 20);
  CHECK(m.in_bounds({-1, 2}));
  CHECK_FALSE(m.in_bounds({-1, 1}));
  CHECK_FALSE(m.in_bounds({0, 4}));
}

TEST_CASE("shortest_path examples") {
  GameMap m(5, 5);
  SUBCASE("zero length") {
    auto p = shortest_path(m, {1, 1}, {1, 1});
    REQUIRE(p);
    CHECK(*p == std::vector<HexCoord>{{1, 1}});
  }
  SUBCASE("adjacent") {
    auto p = shortest_path(m, {1, 1}, {2, 1});
    REQUIRE(p);
    CHECK(*p == std::vector<HexCoord>{{1, 1}, {2, 1}});
  }
  SUBCASE("corner to corner") {
    const HexCoord from = m.cell_at(0);
    const HexCoord to = m.cell_at(m.cell_count() - 1);
    auto p = shortest_path(m, from, to);
    REQUIRE(p);
    CHECK(static_cast<int>(p->size()) == distance(from, to) + 1);
    CHECK(static_cast<int>(p->size()) == *oracle::bfs_path_cells(m, from, to));
  }
  SUBCASE("out of bounds endpoint") {
    CHECK_THROWS_AS(shortest_path(m, {0, 0}, {40, 0}), std::invalid_argument);
  }
  SUBCASE("unreachable") {
    for (HexCoord c : m.cells()) {
      if (c.r == 2) m.set_tile(c, {Terrain::Water, 0});
    }
    CHECK_FALSE(shortest_path(m, m.cell_at(0), m.cell_at(m.cell_count() - 1)));
  }
}

TEST_CASE("elevation changes need a ramp") {
  GameMap m(1, 3);
  m.set_tile({1, 0}, {Terrain::Mountain, 1});
  CHECK_FALSE(m.can_step({0, 0}, {1, 0}));
  m.set_tile({0, 0}, {Terrain::Ramp, 0});
  CHECK(m.can_step({0, 0}, {1, 0}));
  CHECK(m.can_step({1, 0}, {0, 0}));
  CHECK_FALSE(m.can_step({1, 0}, {2, 0}));
}

TEST_CASE("shortest_path matches BFS oracle on random maps") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const GameMap m = oracle::random_map(rng, 15, 15);
    std::uniform_int_distribution<int> idx(0, m.cell_count() - 1);
    for (int k = 0; k < 5; ++k) {
      const HexCoord a = m.cell_at(idx(rng));
      const HexCoord b = m.cell_at(idx(rng));
      if (!m.traversable(a)) continue;
      const auto expect = oracle::bfs_path_cells(m, a, b);
      const auto got = shortest_path(m, a, b);
      REQUIRE(expect.has_value() == got.has_value());
      if (!got) continue;
      CHECK(static_cast<int>(got->size()) == *expect);
      CHECK(got->front() == a);
      CHECK(got->back() == b);
      for (std::size_t i = 1; i < got->size(); ++i) {
        CHECK(distance((*got)[i - 1], (*got)[i]) == 1);
        CHECK(m.can_step((*got)[i - 1], (*got)[i]));
      }
    }
  }
}

TEST_CASE("shortest_path is deterministic") {
  GameMap m(9, 9);
  auto a = shortest_path(m, {0, 0}, {4, 6});
  auto b = shortest_path(m, {0, 0}, {4, 6});
  CHECK(a == b);
}

TEST_CASE("visible_set examples") {
  GameMap m(9, 9);
  const Pose pose{{2, 4}, Heading(0)};
  CHECK(visible_set(m, pose, 210, 0) == std::set<HexCoord>{pose.cell});

  const auto ring = visible_set(m, pose, 360, 1);
  CHECK(ring.size() == 7);
  for (int h = 0; h < 6; ++h) CHECK(ring.contains(neighbor(pose.cell, Heading(h))));

  const Pose corner{m.cell_at(0), Heading(0)};
  CHECK(visible_set(m, corner, 360, 1).size() == 3);

  const auto half = visible_set(m, pose, 180, 2);
  std::set<HexCoord> expect;
  for (HexCoord c : m.cells()) {
    if (distance(pose.cell, c) <= 2 && oracle::in_cone_by_dot(pose, c, 180)) expect.insert(c);
  }
  CHECK(half == expect);
}

TEST_CASE("visible_set matches the dot-product oracle and is monotone") {
  GameMap m(15, 15);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> idx(0, m.cell_count() - 1);
  std::uniform_int_distribution<int> head(0, 5);
  const double fovs[] = {60, 90, 120, 180, 210, 300, 360};
  for (int trial = 0; trial < 60; ++trial) {
    const Pose pose{m.cell_at(idx(rng)), Heading(head(rng))};
    std::set<HexCoord> prev_range;
    for (int range = 0; range <= 8; ++range) {
      std::set<HexCoord> prev_fov;
      for (double fov : fovs) {
        const auto vis = visible_set(m, pose, fov, range);
        for (HexCoord c : m.cells()) {
          const bool expect =
              c == pose.cell || (distance(pose.cell, c) <= range && oracle::in_cone_by_dot(pose, c, fov));
          REQUIRE(vis.contains(c) == expect);
        }
        for (HexCoord c : prev_fov) REQUIRE(vis.contains(c));
        prev_fov = vis;
      }
      const auto at210 = visible_set(m, pose, 210, range);
      for (HexCoord c : prev_range) REQUIRE(at210.contains(c));
      prev_range = at210;
    }
  }
}
