#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cb2/gamecore.hpp"
#include "cb2/serialize.hpp"

namespace cb2 {

/// Malformed or inconsistent scenario; `field()` names the offending part.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A scenario is a game state in canonical form. Only `map`, `leader_pose`
/// and `follower_pose` are required; other fields fall back to what a fresh
/// game on that map would hold.
GameState load_scenario(std::string_view text);
GameState load_scenario_file(const std::filesystem::path& path);

/// Canonical text that load_scenario turns back into `state`.
std::string export_scenario(const GameState& state);

/// Why `edit` may not be applied to `state`, if it may not.
std::optional<std::string> validate_edit(const GameState& state, const StateEdit& edit);

}  // namespace cb2
