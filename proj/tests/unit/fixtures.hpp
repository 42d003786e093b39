#pragma once

#include <vector>

#include "cb2/gamecore.hpp"
#include "cb2/mapgen.hpp"

namespace cb2::fixture {

inline Card card(int id, HexCoord cell, Color color, Shape shape, int count, bool selected = false) {
  return Card{id, cell, CardFace{color, shape, count}, selected};
}

/// All-grass map with the given cards; leader at row 0, follower at row 2.
inline GameMap open_map(int rows, int cols, std::vector<Card> cards) {
  GameMap m(rows, cols);
  m.leader_spawn = m.cell_at(0);
  m.follower_spawn = m.cell_at(2 * cols);
  m.initial_cards = std::move(cards);
  return m;
}

inline GameConfig config_for(const GameMap& m) {
  GameConfig c;
  c.card_count = static_cast<int>(m.initial_cards.size());
  return c;
}

/// Three far-apart cards so movement in tests doesn't toggle anything by accident.
inline std::vector<Card> corner_cards(int rows, int cols) {
  GameMap m(rows, cols);
  return {card(0, m.cell_at(rows * cols - 1), Color::Black, Shape::Plus, 1),
          card(1, m.cell_at(rows * cols - 2), Color::Blue, Shape::Torch, 2),
          card(2, m.cell_at(rows * cols - 3), Color::Green, Shape::Star, 3)};
}

inline GameState open_game(int rows = 7, int cols = 7) {
  GameMap m = open_map(rows, cols, corner_cards(rows, cols));
  return new_game(m, config_for(m), 1);
}

inline GenConfig small_gen(std::uint64_t seed) {
  GenConfig g;
  g.seed = seed;
  return g;
}

}  // namespace cb2::fixture
