#include "cb2/game_map.hpp"

#include <stdexcept>

namespace cb2 {

GameMap::GameMap(int rows, int cols)
    : rows_(rows),
      cols_(cols),
      tiles_(static_cast<std::size_t>(rows * cols)),
      props_(static_cast<std::size_t>(rows * cols)) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("GameMap: dimensions must be positive");
}

bool GameMap::in_bounds(HexCoord c) const {
  if (c.r < 0 || c.r >= rows_) return false;
  const int col = c.q + c.r / 2;
  return col >= 0 && col < cols_;
}

int GameMap::index_of(HexCoord c) const {
  if (!in_bounds(c)) throw std::out_of_range("GameMap: cell out of bounds");
  return c.r * cols_ + (c.q + c.r / 2);
}

HexCoord GameMap::cell_at(int index) const {
  const int r = index / cols_;
  const int col = index % cols_;
  return {col - r / 2, r};
}

std::vector<HexCoord> GameMap::cells() const {
  std::vector<HexCoord> out;
  out.reserve(static_cast<std::size_t>(cell_count()));
  for (int i = 0; i < cell_count(); ++i) out.push_back(cell_at(i));
  return out;
}

void GameMap::set_prop(Prop p) {
  const auto idx = static_cast<std::size_t>(index_of(p.cell));
  props_[idx] = std::move(p);
}

void GameMap::clear_props() {
  for (auto& p : props_) p.reset();
}

std::vector<Prop> GameMap::props() const {
  std::vector<Prop> out;
  for (const auto& p : props_) {
    if (p) out.push_back(*p);
  }
  return out;
}

bool GameMap::traversable(HexCoord c) const {
  if (!in_bounds(c)) return false;
  const auto idx = static_cast<std::size_t>(index_of(c));
  return tiles_[idx].terrain != Terrain::Water && !props_[idx].has_value();
}

bool GameMap::can_step(HexCoord from, HexCoord to) const {
  if (!in_bounds(from) || !traversable(to)) return false;
  const Tile& a = tile(from);
  const Tile& b = tile(to);
  if (a.elevation == b.elevation) return true;
  return a.terrain == Terrain::Ramp || b.terrain == Terrain::Ramp;
}

}  // namespace cb2
