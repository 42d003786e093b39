#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cb2/game_state.hpp"

namespace cb2 {

using GameId = std::int64_t;

enum class Actor { Leader, Follower, Server };

constexpr Actor actor_of(Role r) { return r == Role::Leader ? Actor::Leader : Actor::Follower; }

enum class TurnReason { StepsExhausted, TimerExpired, EndTurnAction };

/// Partial replacement of state, used by scenario edits. Each present field
/// replaces the corresponding part of the state wholesale (tiles are patched
/// cell by cell).
struct StateEdit {
  std::optional<std::vector<ObservedTile>> tiles;
  std::optional<std::vector<Prop>> props;
  std::optional<std::vector<Card>> cards;
  std::optional<Pose> leader_pose;
  std::optional<Pose> follower_pose;

  bool empty() const {
    return !tiles && !props && !cards && !leader_pose && !follower_pose;
  }
  friend bool operator==(const StateEdit&, const StateEdit&) = default;
};

namespace event {

struct GameStart {
  GameMap map;
  GameConfig config;
  std::uint64_t seed = 0;
  Timestamp start_time = 0;
  // Scenario games start from an explicit state instead of new_game().
  std::shared_ptr<const GameState> initial_state;

  friend bool operator==(const GameStart& a, const GameStart& b) {
    const bool same_initial =
        (!a.initial_state && !b.initial_state) ||
        (a.initial_state && b.initial_state && *a.initial_state == *b.initial_state);
    return same_initial && a.map == b.map && a.config == b.config && a.seed == b.seed &&
           a.start_time == b.start_time;
  }
};

struct Move {
  Role role = Role::Leader;
  ActionKind action = ActionKind::Forward;
  Pose from;
  Pose to;
  int steps_remaining = 0;  // after the move
  friend bool operator==(const Move&, const Move&) = default;
};

struct CardToggle {
  int card_id = 0;
  bool selected = false;
  friend bool operator==(const CardToggle&, const CardToggle&) = default;
};

struct SetCompleted {
  std::vector<int> removed;
  std::vector<Card> spawned;
  int score = 0;
  int bonus_turns = 0;
  std::uint64_t rng_counter = 0;  // generator counter after drawing the new cards
  friend bool operator==(const SetCompleted&, const SetCompleted&) = default;
};

struct InstructionSent {
  int id = 0;
  std::string text;
  int issued_turn = 0;
  friend bool operator==(const InstructionSent&, const InstructionSent&) = default;
};

struct InstructionActivated {
  int id = 0;
  friend bool operator==(const InstructionActivated&, const InstructionActivated&) = default;
};

struct InstructionDone {
  int id = 0;
  friend bool operator==(const InstructionDone&, const InstructionDone&) = default;
};

struct InstructionCancelled {
  std::vector<int> ids;
  friend bool operator==(const InstructionCancelled&, const InstructionCancelled&) = default;
};

struct TimerExpired {
  int turn_number = 0;
  friend bool operator==(const TimerExpired&, const TimerExpired&) = default;
};

struct TurnTransition {
  TurnReason reason = TurnReason::EndTurnAction;
  Role from_role = Role::Leader;
  Role to_role = Role::Follower;
  int turns_remaining = 0;
  int steps_remaining = 0;
  Timestamp deadline = 0;
  int turn_number = 0;
  friend bool operator==(const TurnTransition&, const TurnTransition&) = default;
};

struct Abandoned {
  Role role = Role::Leader;
  friend bool operator==(const Abandoned&, const Abandoned&) = default;
};

struct GameOver {
  int score = 0;
  friend bool operator==(const GameOver&, const GameOver&) = default;
};

struct ScenarioEdit {
  StateEdit edit;
  friend bool operator==(const ScenarioEdit&, const ScenarioEdit&) = default;
};

}  // namespace event

using EventBody =
    std::variant<event::GameStart, event::Move, event::CardToggle, event::SetCompleted,
                 event::InstructionSent, event::InstructionActivated, event::InstructionDone,
                 event::InstructionCancelled, event::TimerExpired, event::TurnTransition,
                 event::Abandoned, event::GameOver, event::ScenarioEdit>;

/// One entry of a game's append-only log.
struct GameEvent {
  GameId game_id = 0;
  std::int64_t seq = 0;
  Timestamp wall_time = 0;
  Actor actor = Actor::Server;
  EventBody body;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&body);
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(body);
  }

  friend bool operator==(const GameEvent&, const GameEvent&) = default;
};

/// Wire/storage name of the event kind, e.g. "GameStart".
std::string_view event_kind_name(const EventBody& body);

inline bool is_terminal(const GameEvent& e) {
  return e.is<event::GameOver>() || e.is<event::Abandoned>();
}

}  // namespace cb2
