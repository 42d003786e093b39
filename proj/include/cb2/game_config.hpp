#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cb2 {

/// Rules and budgets of one game. Defaults are tunable configuration, not
/// measured constants.
struct GameConfig {
  int leader_steps_per_turn = 5;
  int follower_steps_per_turn = 10;
  int leader_turn_seconds = 50;
  int follower_turn_seconds = 15;
  int initial_turns = 12;  // individual turns, leader first
  std::vector<int> turn_bonus_schedule = {6, 6, 6, 5, 5, 5, 4, 4, 4, 3, 3, 3, 2, 2, 2, 1};
  int card_count = 21;
  int fog_range = 14;
  double fov_degrees = 210.0;
  bool hide_card_patterns = false;
  int num_colors = 6;
  int num_shapes = 6;

  /// Bonus turns granted for completing set number `set_number` (1-based);
  /// clamped to the last schedule entry.
  int bonus_for_set(int set_number) const;

  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

/// Returns a description of the first violated constraint, if any.
std::optional<std::string> validate_config(const GameConfig& config);

}  // namespace cb2
