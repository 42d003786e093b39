#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cb2/game_events.hpp"
#include "cb2/game_state.hpp"

namespace cb2 {

enum class RejectReason {
  WrongActor,
  IllegalMove,
  NoActiveInstruction,
  EmptyInstructionText,
  InstructionTooLong,
  GameOver,
};

std::string_view reject_reason_name(RejectReason r);

/// Thrown when a game cannot be constructed from the given map and config.
class GameSetupError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by apply_event when an event does not fit the state it is applied to.
class EventApplyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Transition {
  GameState state;
  std::vector<GameEvent> events;  // game_id and seq are left for the log owner
};

struct ActionResult {
  GameState state;
  std::vector<GameEvent> events;
  std::optional<RejectReason> rejection;

  bool accepted() const { return !rejection.has_value(); }
};

/// Fresh game: leader to move, cards and spawns taken from the map.
GameState new_game(const GameMap& map, const GameConfig& config, std::uint64_t seed,
                   Timestamp now = 0);

/// First log entry of a game. Scenario games embed their full initial state.
GameEvent start_event(const GameState& initial, std::uint64_t seed, Timestamp now,
                      bool embed_state = false);

/// Assigns game ids and dense sequence numbers to events as they are logged.
struct EventNumbering {
  GameId game_id = 0;
  std::int64_t next_seq = 0;

  void stamp(GameEvent& e) {
    e.game_id = game_id;
    e.seq = next_seq++;
  }
  void stamp(std::vector<GameEvent>& events) {
    for (auto& e : events) stamp(e);
  }
};

/// Validates `action` for `actor` against `state` without applying it. Timer
/// expiry is not considered.
std::optional<RejectReason> check_action(const GameState& state, Role actor,
                                         const Action& action);

/// Applies one action. If the turn deadline has passed the turn expires
/// first, and the action is then judged against the post-expiry state. A
/// rejected action leaves the state untouched apart from such an expiry.
ActionResult apply_action(const GameState& state, Role actor, const Action& action,
                          Timestamp now);

/// Resolves the current selection: exactly three selected cards forming a
/// valid set are replaced by three fresh cards and scored.
Transition resolve_sets(const GameState& state, Timestamp now);

Transition advance_turn(const GameState& state, TurnReason reason, Timestamp now);

/// TimerExpired marker followed by advance_turn(TimerExpired).
Transition expire_turn(const GameState& state, Timestamp now);

/// Ends the game because `role` disconnected.
Transition abandon(const GameState& state, Role role, Timestamp now);

Observation observe(const GameState& state, Role role);

/// Action kinds apply_action would accept for `role` right now.
std::vector<ActionKind> legal_actions(const GameState& state, Role role);

/// The single mutation path shared by live play and replay.
GameState apply_event(GameState state, const GameEvent& event);

/// Applies a partial edit to a state. Does not validate.
void apply_edit(GameState& state, const StateEdit& edit);

/// Structural invariants of a state; returns the first violation found.
std::optional<std::string> check_state_invariants(const GameState& state);

}  // namespace cb2
