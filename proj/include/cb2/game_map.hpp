#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cb2/cards.hpp"
#include "cb2/hexgrid.hpp"

namespace cb2 {

enum class Terrain { Grass, Path, Water, Mountain, Ramp };
enum class PropKind { House, Tree, Streetlight, Rock };
enum class RoofColor { Red, Blue, Green, Yellow, Brown };

struct Tile {
  Terrain terrain = Terrain::Grass;
  int elevation = 0;

  friend constexpr bool operator==(const Tile&, const Tile&) = default;
};

struct HouseVariant {
  RoofColor roof = RoofColor::Red;
  int floors = 1;

  friend constexpr bool operator==(const HouseVariant&, const HouseVariant&) = default;
};

struct Prop {
  PropKind kind = PropKind::Tree;
  HexCoord cell;
  std::optional<HouseVariant> house;  // set only for houses

  friend bool operator==(const Prop&, const Prop&) = default;
};

/// Rectangular hex map of `rows` x `cols` cells. Row r spans axial columns
/// q in [-floor(r/2), cols - floor(r/2)), which lays the cells out as an
/// offset rectangle on screen.
class GameMap {
 public:
  GameMap() = default;
  GameMap(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int cell_count() const { return rows_ * cols_; }

  bool in_bounds(HexCoord c) const;
  int index_of(HexCoord c) const;
  HexCoord cell_at(int index) const;
  std::vector<HexCoord> cells() const;

  const Tile& tile(HexCoord c) const { return tiles_[static_cast<std::size_t>(index_of(c))]; }
  void set_tile(HexCoord c, Tile t) { tiles_[static_cast<std::size_t>(index_of(c))] = t; }

  const std::optional<Prop>& prop_at(HexCoord c) const {
    return props_[static_cast<std::size_t>(index_of(c))];
  }
  bool has_prop(HexCoord c) const { return prop_at(c).has_value(); }
  void set_prop(Prop p);
  void clear_prop(HexCoord c) { props_[static_cast<std::size_t>(index_of(c))].reset(); }
  void clear_props();
  /// All props ordered by cell index.
  std::vector<Prop> props() const;

  /// In bounds, not water, and not occupied by a prop.
  bool traversable(HexCoord c) const;
  /// A single move between adjacent cells. Elevation may only change when
  /// either endpoint is a ramp.
  bool can_step(HexCoord from, HexCoord to) const;

  // Placement data produced by map generation.
  std::vector<Card> initial_cards;
  HexCoord leader_spawn;
  HexCoord follower_spawn;
  std::uint64_t seed = 0;
  std::uint32_t seed_offset = 0;  // regeneration attempts folded into the seed

  friend bool operator==(const GameMap&, const GameMap&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Tile> tiles_;
  std::vector<std::optional<Prop>> props_;
};

inline int default_elevation(Terrain t) { return t == Terrain::Mountain ? 1 : 0; }

}  // namespace cb2
