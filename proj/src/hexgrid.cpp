#include "cb2/hexgrid.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include "cb2/game_map.hpp"

namespace cb2 {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kAngleEpsilon = 1e-9;

}  // namespace

double bearing_degrees(HexCoord from, HexCoord to) {
  const HexCoord d = to - from;
  const double x = std::sqrt(3.0) * (d.q + d.r / 2.0);
  const double y = -1.5 * d.r;
  return std::atan2(y, x) * 180.0 / kPi;
}

bool is_visible(const Pose& pose, HexCoord cell, double fov_degrees, int range) {
  if (cell == pose.cell) return true;
  if (distance(pose.cell, cell) > range) return false;
  if (fov_degrees >= 360.0) return true;
  double diff = std::fabs(bearing_degrees(pose.cell, cell) - 60.0 * pose.heading.value());
  diff = std::fmod(diff, 360.0);
  if (diff > 180.0) diff = 360.0 - diff;
  return diff <= fov_degrees / 2.0 + kAngleEpsilon;
}

std::set<HexCoord> visible_set(const GameMap& map, const Pose& pose, double fov_degrees,
                               int range) {
  std::set<HexCoord> out;
  if (map.in_bounds(pose.cell)) out.insert(pose.cell);
  for (int dr = -range; dr <= range; ++dr) {
    for (int dq = -range; dq <= range; ++dq) {
      const HexCoord c{pose.cell.q + dq, pose.cell.r + dr};
      if (!map.in_bounds(c)) continue;
      if (is_visible(pose, c, fov_degrees, range)) out.insert(c);
    }
  }
  return out;
}

std::optional<std::vector<HexCoord>> shortest_path(const GameMap& map, HexCoord from,
                                                   HexCoord to) {
  if (!map.in_bounds(from) || !map.in_bounds(to)) {
    throw std::invalid_argument("shortest_path: endpoint out of bounds");
  }
  if (from == to) return std::vector<HexCoord>{from};

  std::vector<int> parent(static_cast<std::size_t>(map.cell_count()), -1);
  const int start = map.index_of(from);
  const int goal = map.index_of(to);
  parent[static_cast<std::size_t>(start)] = start;
  std::deque<int> frontier{start};
  while (!frontier.empty()) {
    const int cur = frontier.front();
    frontier.pop_front();
    if (cur == goal) break;
    const HexCoord c = map.cell_at(cur);
    for (int d = 0; d < 6; ++d) {
      const HexCoord n = neighbor(c, Heading(d));
      if (!map.in_bounds(n) || !map.can_step(c, n)) continue;
      const int ni = map.index_of(n);
      if (parent[static_cast<std::size_t>(ni)] != -1) continue;
      parent[static_cast<std::size_t>(ni)] = cur;
      frontier.push_back(ni);
    }
  }
  if (parent[static_cast<std::size_t>(goal)] == -1) return std::nullopt;

  std::vector<HexCoord> path;
  for (int cur = goal; cur != start; cur = parent[static_cast<std::size_t>(cur)]) {
    path.push_back(map.cell_at(cur));
  }
  path.push_back(from);
  return std::vector<HexCoord>(path.rbegin(), path.rend());
}

}  // namespace cb2
