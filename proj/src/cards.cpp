#include "cb2/cards.hpp"

#include <vector>

namespace cb2 {

bool is_compatible_selection(std::span<const CardFace> faces) {
  if (faces.size() > static_cast<std::size_t>(kSetSize)) return false;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    for (std::size_t j = i + 1; j < faces.size(); ++j) {
      if (faces[i].color == faces[j].color || faces[i].shape == faces[j].shape ||
          faces[i].count == faces[j].count) {
        return false;
      }
    }
  }
  return true;
}

bool is_valid_set(std::span<const CardFace> faces) {
  return faces.size() == static_cast<std::size_t>(kSetSize) && is_compatible_selection(faces);
}

bool is_valid_set(std::span<const Card> cards) {
  std::vector<CardFace> faces;
  faces.reserve(cards.size());
  for (const auto& c : cards) faces.push_back(c.face);
  return is_valid_set(faces);
}

}  // namespace cb2
