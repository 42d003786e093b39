#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cb2/game_state.hpp"

namespace cb2 {

// Bot instruction grammar, commands separated by ';':
//   turn left | turn right | forward N | backward N | goto Q R | card Q R | wait

struct Command {
  enum class Kind { TurnLeft, TurnRight, Forward, Backward, Goto, ToggleCardAt, Wait };
  Kind kind = Kind::Wait;
  HexCoord target;  // Goto and ToggleCardAt

  friend bool operator==(const Command&, const Command&) = default;
};

struct ParsedInstruction {
  std::vector<Command> commands;
  std::optional<std::string> error;  // set when the text is outside the grammar

  bool unparseable() const { return error.has_value(); }
};

/// Case and whitespace tolerant. `forward 3` expands to three Forward commands.
ParsedInstruction parse_instruction(std::string_view text);

std::string format_command(const Command& c);

/// Map rebuilt from what an observer can see; unseen cells become water.
GameMap map_from_observation(const Observation& obs);

struct RouteOptions {
  std::set<HexCoord> blocked;   // never entered, e.g. the other agent
  std::set<HexCoord> terminal;  // may be entered but not passed through, e.g. card cells
  bool allow_backward = false;
};

/// Shortest action sequence after which the agent has stepped into `target`.
/// Standing on the target already does not count; the agent must leave and re-enter.
std::optional<std::vector<ActionKind>> plan_route_enter(const GameMap& map, const Pose& from,
                                                        HexCoord target, const RouteOptions& opts);

/// Like plan_route_enter but satisfied by already standing on the target.
std::optional<std::vector<ActionKind>> plan_route(const GameMap& map, const Pose& from, HexCoord target,
                                                  const RouteOptions& opts);

/// Number of actions needed to enter each cell (by cell index), -1 when unreachable.
std::vector<int> entry_costs(const GameMap& map, const Pose& from, const RouteOptions& opts);

/// Pose after executing a sequence of movement actions, ignoring legality.
Pose simulate(Pose p, const std::vector<ActionKind>& actions);

/// Executes the active instruction's commands within the visible region.
class FollowerBot {
 public:
  Action act(const Observation& obs);

 private:
  void remember(const Observation& obs);
  Action next_for_commands(const Observation& obs);
  void abandon() { commands_.clear(); }

  int instruction_id_ = -1;
  std::vector<Command> commands_;
  std::size_t cursor_ = 0;
  std::map<HexCoord, Tile> known_tiles_;
  std::map<HexCoord, bool> known_blocking_prop_;
  std::map<HexCoord, int> known_cards_;  // cell -> id
};

struct LeaderPlan {
  std::vector<int> follower_cards;  // card ids, in visiting order
  std::optional<int> leader_card;
  std::vector<ActionKind> leader_moves;
  std::optional<std::string> instruction;  // absent when the follower has nothing to do
  bool reposition = false;
  int cost = 0;
};

/// One turn of planning for the leader. Cards of the best valid triple that need
/// toggling are split between the agents: the leader takes at most one card it can
/// reach this turn more cheaply than the follower, the follower gets the rest.
LeaderPlan scripted_leader(const Observation& leader_obs);

/// Turns a plan into one action at a time, cancelling and reissuing follower
/// instructions when the target cards change.
class LeaderBot {
 public:
  Action act(const Observation& obs);

 private:
  int planned_turn_ = -1;
  std::vector<Action> queue_;
  std::size_t cursor_ = 0;
  std::vector<int> issued_cards_;
};

}  // namespace cb2
