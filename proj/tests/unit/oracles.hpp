#pragma once

// Independent reference implementations used to derive expected values.

#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "cb2/cards.hpp"
#include "cb2/game_map.hpp"
#include "cb2/hexgrid.hpp"

namespace cb2::oracle {

/// Hex distance by breadth-first search over the raw neighbour relation.
inline int bfs_distance(HexCoord a, HexCoord b, int limit = 64) {
  static const int dq[6] = {1, 1, 0, -1, -1, 0};
  static const int dr[6] = {0, -1, -1, 0, 1, 1};
  std::map<std::pair<int, int>, int> dist{{{a.q, a.r}, 0}};
  std::deque<std::pair<int, int>> frontier{{a.q, a.r}};
  while (!frontier.empty()) {
    auto [q, r] = frontier.front();
    frontier.pop_front();
    const int d = dist[{q, r}];
    if (q == b.q && r == b.r) return d;
    if (d >= limit) continue;
    for (int k = 0; k < 6; ++k) {
      std::pair<int, int> n{q + dq[k], r + dr[k]};
      if (dist.emplace(n, d + 1).second) frontier.push_back(n);
    }
  }
  return -1;
}

/// Number of cells on a shortest traversable path, or nullopt.
inline std::optional<int> bfs_path_cells(const GameMap& map, HexCoord from, HexCoord to) {
  std::map<HexCoord, int> dist{{from, 1}};
  std::deque<HexCoord> frontier{from};
  while (!frontier.empty()) {
    HexCoord c = frontier.front();
    frontier.pop_front();
    if (c == to) return dist[c];
    for (const HexCoord& d : kDirections) {
      HexCoord n = c + d;
      if (!map.in_bounds(n) || !map.can_step(c, n)) continue;
      if (dist.emplace(n, dist[c] + 1).second) frontier.push_back(n);
    }
  }
  return std::nullopt;
}

/// Fewest forward/turn actions that end with a step into `target`, by BFS over
/// (cell, heading, has_stepped) triples kept in ordered maps.
inline std::optional<int> pose_route_length(const GameMap& map, Pose from, HexCoord target,
                                            const std::set<HexCoord>& blocked, bool allow_backward) {
  using Key = std::tuple<HexCoord, int, bool>;
  std::map<Key, int> dist{{{from.cell, from.heading.value(), false}, 0}};
  std::deque<Key> frontier{{from.cell, from.heading.value(), false}};
  while (!frontier.empty()) {
    const Key k = frontier.front();
    frontier.pop_front();
    const auto [cell, h, stepped] = k;
    const int d = dist[k];
    if (stepped && cell == target) return d;
    std::vector<Key> next{{cell, (h + 1) % 6, stepped}, {cell, (h + 5) % 6, stepped}};
    std::vector<HexCoord> moves{cell + kDirections[static_cast<std::size_t>(h)]};
    if (allow_backward) moves.push_back(cell - kDirections[static_cast<std::size_t>(h)]);
    for (HexCoord n : moves) {
      if (map.in_bounds(n) && map.can_step(cell, n) && !blocked.count(n)) next.emplace_back(n, h, true);
    }
    for (const Key& n : next) {
      if (dist.emplace(n, d + 1).second) frontier.push_back(n);
    }
  }
  return std::nullopt;
}

/// Half-plane / cone test done with pixel-space vectors instead of angles.
inline bool in_cone_by_dot(const Pose& pose, HexCoord cell, double fov_degrees) {
  auto px = [](HexCoord d) {
    return std::pair<double, double>{std::sqrt(3.0) * (d.q + d.r / 2.0), -1.5 * d.r};
  };
  auto [fx, fy] = px(kDirections[static_cast<std::size_t>(pose.heading.value())]);
  auto [cx, cy] = px(cell - pose.cell);
  const double norm = std::hypot(fx, fy) * std::hypot(cx, cy);
  if (norm == 0) return true;
  const double cosang = (fx * cx + fy * cy) / norm;
  return cosang >= std::cos(fov_degrees / 2.0 * 3.14159265358979323846 / 180.0) - 1e-9;
}

/// Random terrain with water, mountains, ramps and props.
inline GameMap random_map(std::mt19937_64& rng, int rows, int cols) {
  GameMap m(rows, cols);
  std::uniform_int_distribution<int> roll(0, 99);
  for (HexCoord c : m.cells()) {
    const int v = roll(rng);
    if (v < 15) {
      m.set_tile(c, {Terrain::Water, 0});
    } else if (v < 25) {
      m.set_tile(c, {Terrain::Mountain, 1});
    } else if (v < 30) {
      m.set_tile(c, {Terrain::Ramp, 0});
    } else if (v < 35) {
      m.set_prop({PropKind::Tree, c, std::nullopt});
    }
  }
  return m;
}

/// All 6*6*3 card faces.
inline std::vector<CardFace> all_faces() {
  std::vector<CardFace> out;
  for (int c = 0; c < kMaxColors; ++c) {
    for (int s = 0; s < kMaxShapes; ++s) {
      for (int n = 1; n <= kMaxCardCount; ++n) {
        out.push_back({static_cast<Color>(c), static_cast<Shape>(s), n});
      }
    }
  }
  return out;
}

/// Set validity written as three explicit pairwise comparisons per attribute.
inline bool brute_force_valid(const CardFace& a, const CardFace& b, const CardFace& c) {
  const bool colors = a.color != b.color && a.color != c.color && b.color != c.color;
  const bool shapes = a.shape != b.shape && a.shape != c.shape && b.shape != c.shape;
  const bool counts = a.count != b.count && a.count != c.count && b.count != c.count;
  return colors && shapes && counts;
}

}  // namespace cb2::oracle
