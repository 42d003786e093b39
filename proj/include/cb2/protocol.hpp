#pragma once

// Wire format between clients and the server, one JSON text per websocket frame:
//   {"kind": "<Kind>", "payload": {...}, "seq": <n>, "version": "1.0"}
// Keys are sorted, payloads use the canonical serialization of the game types.

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cb2/game_events.hpp"
#include "cb2/game_state.hpp"

namespace cb2 {

inline constexpr std::string_view kProtocolVersion = "1.0";

namespace msg {

// client -> server
struct JoinLobby {
  std::string lobby_id;
  std::string display_name;
  std::vector<Role> qualifications;  // roles the player may take
  bool is_bot = false;
  bool record = true;
  friend bool operator==(const JoinLobby&, const JoinLobby&) = default;
};
struct PlayerAction {
  Action action;
  friend bool operator==(const PlayerAction&, const PlayerAction&) = default;
};
struct LeaveGame {
  friend bool operator==(const LeaveGame&, const LeaveGame&) = default;
};
struct Pong {
  friend bool operator==(const Pong&, const Pong&) = default;
};

// server -> client
struct Joined {
  int queue_position = 0;
  friend bool operator==(const Joined&, const Joined&) = default;
};
struct Paired {
  GameId game_id = 0;
  Role role = Role::Leader;
  friend bool operator==(const Paired&, const Paired&) = default;
};
struct StateSync {
  Observation observation;
  std::int64_t in_reply_to = 0;  // seq of the sender's action, 0 otherwise
  friend bool operator==(const StateSync&, const StateSync&) = default;
};
struct TurnUpdate {
  TurnState turn;
  friend bool operator==(const TurnUpdate&, const TurnUpdate&) = default;
};
struct InstructionUpdate {
  std::vector<Instruction> instructions;
  friend bool operator==(const InstructionUpdate&, const InstructionUpdate&) = default;
};
struct GameOver {
  int score = 0;
  bool abandoned = false;
  friend bool operator==(const GameOver&, const GameOver&) = default;
};
struct Rejected {
  std::string reason;
  std::int64_t in_reply_to = 0;
  friend bool operator==(const Rejected&, const Rejected&) = default;
};
struct Ping {
  friend bool operator==(const Ping&, const Ping&) = default;
};
struct Error {
  std::string code;
  std::string message;
  friend bool operator==(const Error&, const Error&) = default;
};

// scenario editing and tutorials
struct ScenarioAttach {
  GameId game_id = 0;
  friend bool operator==(const ScenarioAttach&, const ScenarioAttach&) = default;
};
struct ScenarioPush {
  StateEdit edit;
  friend bool operator==(const ScenarioPush&, const ScenarioPush&) = default;
};
struct ScenarioEventFeed {
  GameEvent event;
  friend bool operator==(const ScenarioEventFeed&, const ScenarioEventFeed&) = default;
};
struct ScenarioAck {
  bool ok = true;
  std::string reason;
  std::int64_t in_reply_to = 0;
  friend bool operator==(const ScenarioAck&, const ScenarioAck&) = default;
};
struct TutorialPrompt {
  int index = 0;
  std::string text;
  friend bool operator==(const TutorialPrompt&, const TutorialPrompt&) = default;
};

}  // namespace msg

using Payload =
    std::variant<msg::JoinLobby, msg::PlayerAction, msg::LeaveGame, msg::Pong, msg::Joined, msg::Paired,
                 msg::StateSync, msg::TurnUpdate, msg::InstructionUpdate, msg::GameOver, msg::Rejected,
                 msg::Ping, msg::Error, msg::ScenarioAttach, msg::ScenarioPush, msg::ScenarioEventFeed,
                 msg::ScenarioAck, msg::TutorialPrompt>;

struct WireMessage {
  std::string version{kProtocolVersion};
  std::int64_t seq = 0;
  Payload payload;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&payload);
  }
  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

struct ProtocolError {
  enum class Code { ParseError, VersionMismatch, UnknownKind };
  Code code = Code::ParseError;
  std::string detail;
};

std::string_view kind_name(const Payload& p);
std::string_view to_string(ProtocolError::Code c);
const std::vector<std::string_view>& all_kind_names();

std::string encode(const WireMessage& m);

/// Never throws; anything that is not a well-formed message becomes a ProtocolError.
std::variant<WireMessage, ProtocolError> decode(std::string_view bytes);

/// Numbers outgoing messages on one connection.
class SeqCounter {
 public:
  WireMessage next(Payload p) { return WireMessage{std::string(kProtocolVersion), ++last_, std::move(p)}; }
  std::int64_t last() const { return last_; }

 private:
  std::int64_t last_ = 0;
};

}  // namespace cb2
