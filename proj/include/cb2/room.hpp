#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cb2/event_store.hpp"
#include "cb2/gamecore.hpp"
#include "cb2/lobby.hpp"
#include "cb2/protocol.hpp"

namespace cb2 {

enum class Endpoint { Leader, Follower, Editor };

constexpr Endpoint endpoint_of(Role r) { return r == Role::Leader ? Endpoint::Leader : Endpoint::Follower; }

struct Outbound {
  Endpoint to = Endpoint::Leader;
  Payload payload;
};

struct RoomSetup {
  GameId game_id = 0;
  RoomType type = RoomType::Game;
  GameState initial;
  std::uint64_t seed = 0;
  EventStore* store = nullptr;  // null when the game is not recorded
  Clock clock = system_clock_ms;
  std::vector<std::string> tutorial_prompts;
  Role tutorial_role = Role::Leader;
};

/// One game room as a pure input -> output machine. The caller serializes all
/// calls; every event is stored before the messages that reveal it are returned.
class RoomCore {
 public:
  explicit RoomCore(RoomSetup setup);

  /// Logs GameStart and produces the initial syncs.
  std::vector<Outbound> start();
  std::vector<Outbound> on_action(Role from, std::int64_t msg_seq, const Action& action);
  /// Expires the turn if `turn_number` is still current and its deadline passed.
  std::vector<Outbound> on_timer(int turn_number);
  /// Disconnect or LeaveGame: the game ends as abandoned.
  std::vector<Outbound> on_leave(Role who);
  std::vector<Outbound> on_attach(std::int64_t msg_seq);
  std::vector<Outbound> on_push(std::int64_t msg_seq, const StateEdit& edit);
  void on_editor_detach() { editor_ = false; }

  GameId game_id() const { return setup_.game_id; }
  RoomType type() const { return setup_.type; }
  const GameState& state() const { return state_; }
  const std::vector<GameEvent>& log() const { return log_; }
  bool over() const { return state_.over; }

 private:
  void commit(std::vector<GameEvent> events, std::vector<Outbound>& out);
  void sync(std::vector<Outbound>& out, std::optional<Role> replying, std::int64_t msg_seq,
            const std::vector<GameEvent>& events);

  RoomSetup setup_;
  GameState state_;
  EventNumbering numbering_;
  std::vector<GameEvent> log_;
  bool started_ = false;
  bool editor_ = false;
  bool finished_ = false;
  std::size_t next_prompt_ = 0;
};

}  // namespace cb2
