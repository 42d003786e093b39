#include "cb2/game_config.hpp"

#include <algorithm>

#include "cb2/cards.hpp"

namespace cb2 {

int GameConfig::bonus_for_set(int set_number) const {
  if (turn_bonus_schedule.empty() || set_number < 1) return 0;
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(set_number - 1),
                                         turn_bonus_schedule.size() - 1);
  return turn_bonus_schedule[idx];
}

std::optional<std::string> validate_config(const GameConfig& c) {
  if (c.leader_steps_per_turn <= 0) return "leader_steps_per_turn must be positive";
  if (c.follower_steps_per_turn <= 0) return "follower_steps_per_turn must be positive";
  if (c.leader_turn_seconds <= 0) return "leader_turn_seconds must be positive";
  if (c.follower_turn_seconds <= 0) return "follower_turn_seconds must be positive";
  if (c.initial_turns < 0) return "initial_turns must be non-negative";
  if (c.turn_bonus_schedule.empty()) return "turn_bonus_schedule must not be empty";
  for (std::size_t i = 0; i < c.turn_bonus_schedule.size(); ++i) {
    if (c.turn_bonus_schedule[i] < 0) return "turn_bonus_schedule entries must be non-negative";
    if (i > 0 && c.turn_bonus_schedule[i] > c.turn_bonus_schedule[i - 1]) {
      return "turn_bonus_schedule must be non-increasing";
    }
  }
  if (c.card_count < kSetSize) return "card_count must be at least 3";
  if (c.fog_range < 0) return "fog_range must be non-negative";
  if (!(c.fov_degrees > 0.0 && c.fov_degrees <= 360.0)) return "fov_degrees must be in (0, 360]";
  if (c.num_colors < kSetSize || c.num_colors > kMaxColors) return "num_colors must be in [3, 6]";
  if (c.num_shapes < kSetSize || c.num_shapes > kMaxShapes) return "num_shapes must be in [3, 6]";
  return std::nullopt;
}

}  // namespace cb2
