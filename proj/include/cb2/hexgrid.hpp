#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace cb2 {

class GameMap;

/// Axial hex coordinate. Bounds are a property of the map, not of the coordinate.
struct HexCoord {
  int q = 0;
  int r = 0;

  friend constexpr auto operator<=>(const HexCoord&, const HexCoord&) = default;
  friend constexpr HexCoord operator+(HexCoord a, HexCoord b) { return {a.q + b.q, a.r + b.r}; }
  friend constexpr HexCoord operator-(HexCoord a, HexCoord b) { return {a.q - b.q, a.r - b.r}; }
};

/// One of six headings, counterclockwise in 60 degree steps; 0 points along +q.
class Heading {
 public:
  constexpr Heading() = default;
  constexpr explicit Heading(int direction) : dir_(((direction % 6) + 6) % 6) {}

  constexpr int value() const { return dir_; }
  constexpr Heading opposite() const { return Heading(dir_ + 3); }

  friend constexpr auto operator<=>(const Heading&, const Heading&) = default;

 private:
  int dir_ = 0;
};

enum class Turn { Left, Right };

struct Pose {
  HexCoord cell;
  Heading heading;

  friend constexpr auto operator<=>(const Pose&, const Pose&) = default;
};

inline constexpr std::array<HexCoord, 6> kDirections = {
    HexCoord{+1, 0}, HexCoord{+1, -1}, HexCoord{0, -1},
    HexCoord{-1, 0}, HexCoord{-1, +1}, HexCoord{0, +1},
};

constexpr HexCoord neighbor(HexCoord cell, Heading heading) {
  return cell + kDirections[static_cast<std::size_t>(heading.value())];
}

constexpr Heading rotate(Heading heading, Turn turn) {
  return Heading(heading.value() + (turn == Turn::Left ? 1 : -1));
}

constexpr int distance(HexCoord a, HexCoord b) {
  const int dq = a.q - b.q;
  const int dr = a.r - b.r;
  const int ds = dq + dr;
  return ((dq < 0 ? -dq : dq) + (dr < 0 ? -dr : dr) + (ds < 0 ? -ds : ds)) / 2;
}

/// Bearing of `to` as seen from `from`, in degrees counterclockwise from +q, in (-180, 180].
double bearing_degrees(HexCoord from, HexCoord to);

/// Minimal-length sequence of cells from `from` to `to` (both inclusive) that
/// respects the map's passability rules. Ties are broken by expanding
/// neighbors in direction-index order. Throws std::invalid_argument when an
/// endpoint is out of bounds.
std::optional<std::vector<HexCoord>> shortest_path(const GameMap& map, HexCoord from, HexCoord to);

/// Cells visible from `pose`: within `range` and inside the heading-centred
/// cone of `fov_degrees`. The pose cell is always visible. No occlusion.
std::set<HexCoord> visible_set(const GameMap& map, const Pose& pose, double fov_degrees, int range);

/// Same visibility rule without a map (no bounds check).
bool is_visible(const Pose& pose, HexCoord cell, double fov_degrees, int range);

}  // namespace cb2
