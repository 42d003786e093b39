#pragma once

#include <compare>
#include <span>

#include "cb2/hexgrid.hpp"

namespace cb2 {

enum class Color { Black, Blue, Green, Orange, Pink, Red };
enum class Shape { Plus, Torch, Diamond, Heart, Star, Triangle };

inline constexpr int kMaxColors = 6;
inline constexpr int kMaxShapes = 6;
inline constexpr int kMaxCardCount = 3;
inline constexpr int kSetSize = 3;

/// The pattern printed on a card: `count` copies of a colored shape.
struct CardFace {
  Color color = Color::Black;
  Shape shape = Shape::Plus;
  int count = 1;

  friend constexpr auto operator<=>(const CardFace&, const CardFace&) = default;
};

struct Card {
  int id = 0;
  HexCoord cell;
  CardFace face;
  bool selected = false;

  friend constexpr auto operator<=>(const Card&, const Card&) = default;
};

/// True iff exactly three faces with pairwise-distinct colors, shapes and counts.
bool is_valid_set(std::span<const CardFace> faces);
bool is_valid_set(std::span<const Card> cards);

/// True iff the faces could still be completed into a valid set: at most three,
/// and no color, shape or count repeats.
bool is_compatible_selection(std::span<const CardFace> faces);

}  // namespace cb2
