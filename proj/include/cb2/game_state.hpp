#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cb2/cards.hpp"
#include "cb2/game_config.hpp"
#include "cb2/game_map.hpp"
#include "cb2/hexgrid.hpp"
#include "cb2/rng.hpp"

namespace cb2 {

/// Milliseconds on whatever clock the owner injects.
using Timestamp = std::int64_t;
using Clock = std::function<Timestamp()>;

/// Wall clock in milliseconds since the epoch.
Timestamp system_clock_ms();

enum class Role { Leader, Follower };

constexpr Role other(Role r) { return r == Role::Leader ? Role::Follower : Role::Leader; }

inline constexpr std::size_t kMaxInstructionLength = 1000;

struct TurnState {
  Role active_role = Role::Leader;
  int turns_remaining = 0;
  int steps_remaining = 0;
  Timestamp turn_deadline = 0;
  int score = 0;
  int sets_collected = 0;
  int turn_number = 0;  // count of turn transitions so far

  friend bool operator==(const TurnState&, const TurnState&) = default;
};

enum class InstructionStatus { Queued, Active, Done, Cancelled };

struct Instruction {
  int id = 0;
  std::string text;
  InstructionStatus status = InstructionStatus::Queued;
  int issued_turn = 0;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

enum class ActionKind {
  Forward,
  Backward,
  TurnLeft,
  TurnRight,
  EndTurn,
  Noop,
  SendInstruction,
  MarkInstructionDone,
  CancelInstructions,
};

inline constexpr ActionKind kAllActionKinds[] = {
    ActionKind::Forward,         ActionKind::Backward,
    ActionKind::TurnLeft,        ActionKind::TurnRight,
    ActionKind::EndTurn,         ActionKind::Noop,
    ActionKind::SendInstruction, ActionKind::MarkInstructionDone,
    ActionKind::CancelInstructions,
};

struct Action {
  ActionKind kind = ActionKind::Noop;
  std::string text;  // SendInstruction only

  static Action forward() { return {ActionKind::Forward, {}}; }
  static Action backward() { return {ActionKind::Backward, {}}; }
  static Action turn_left() { return {ActionKind::TurnLeft, {}}; }
  static Action turn_right() { return {ActionKind::TurnRight, {}}; }
  static Action end_turn() { return {ActionKind::EndTurn, {}}; }
  static Action noop() { return {ActionKind::Noop, {}}; }
  static Action send_instruction(std::string text) {
    return {ActionKind::SendInstruction, std::move(text)};
  }
  static Action mark_done() { return {ActionKind::MarkInstructionDone, {}}; }
  static Action cancel_instructions() { return {ActionKind::CancelInstructions, {}}; }

  friend bool operator==(const Action&, const Action&) = default;
};

constexpr bool is_movement(ActionKind k) {
  return k == ActionKind::Forward || k == ActionKind::Backward || k == ActionKind::TurnLeft ||
         k == ActionKind::TurnRight;
}

/// Authoritative snapshot of one game.
struct GameState {
  GameMap map;
  GameConfig config;
  Pose leader_pose;
  Pose follower_pose;
  std::vector<Card> cards;  // ordered by id
  TurnState turn;
  std::vector<Instruction> instructions;  // ordered by id
  DeterministicRng rng;
  int next_card_id = 0;
  int next_instruction_id = 0;
  bool over = false;
  bool abandoned = false;

  const Pose& pose_of(Role r) const { return r == Role::Leader ? leader_pose : follower_pose; }
  Pose& pose_of(Role r) { return r == Role::Leader ? leader_pose : follower_pose; }
  int step_budget(Role r) const {
    return r == Role::Leader ? config.leader_steps_per_turn : config.follower_steps_per_turn;
  }
  int turn_millis(Role r) const {
    return 1000 * (r == Role::Leader ? config.leader_turn_seconds : config.follower_turn_seconds);
  }
  const Card* card_at(HexCoord c) const;
  const Instruction* active_instruction() const;

  friend bool operator==(const GameState&, const GameState&) = default;
};

/// Card as seen by an observer; `face` is absent when the pattern is hidden.
struct CardView {
  int id = 0;
  HexCoord cell;
  bool selected = false;
  std::optional<CardFace> face;

  friend bool operator==(const CardView&, const CardView&) = default;
};

struct ObservedTile {
  HexCoord cell;
  Tile tile;

  friend bool operator==(const ObservedTile&, const ObservedTile&) = default;
};

/// Rules an observer may know about: budgets and the follower's view limits.
struct PublicRules {
  int leader_steps_per_turn = 0;
  int follower_steps_per_turn = 0;
  int fog_range = 0;
  double fov_degrees = 0.0;
  bool hide_card_patterns = false;

  friend bool operator==(const PublicRules&, const PublicRules&) = default;
};

/// Role-filtered view of a GameState.
struct Observation {
  Role role = Role::Leader;
  int rows = 0;
  int cols = 0;
  std::vector<ObservedTile> tiles;  // ordered by cell index
  std::vector<Prop> props;
  std::vector<CardView> cards;
  Pose own_pose;
  std::optional<Pose> other_pose;
  TurnState turn;
  std::vector<Instruction> instructions;
  PublicRules rules;
  std::optional<bool> selection_invalid;  // absent when the observer cannot judge it
  bool game_over = false;
  bool abandoned = false;

  friend bool operator==(const Observation&, const Observation&) = default;
};

}  // namespace cb2
