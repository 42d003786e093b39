#include "cb2/protocol.hpp"

#include <array>

#include "cb2/serialize.hpp"

namespace cb2 {

namespace {

constexpr std::size_t kMaxFrameBytes = 8u << 20;
constexpr int kMaxNesting = 64;

template <class T>
struct KindOf;
#define CB2_KIND(T, NAME) \
  template <>             \
  struct KindOf<msg::T> { \
    static constexpr std::string_view name = NAME; \
  };
CB2_KIND(JoinLobby, "JoinLobby")
CB2_KIND(PlayerAction, "PlayerAction")
CB2_KIND(LeaveGame, "LeaveGame")
CB2_KIND(Pong, "Pong")
CB2_KIND(Joined, "Joined")
CB2_KIND(Paired, "Paired")
CB2_KIND(StateSync, "StateSync")
CB2_KIND(TurnUpdate, "TurnUpdate")
CB2_KIND(InstructionUpdate, "InstructionUpdate")
CB2_KIND(GameOver, "GameOver")
CB2_KIND(Rejected, "Rejected")
CB2_KIND(Ping, "Ping")
CB2_KIND(Error, "Error")
CB2_KIND(ScenarioAttach, "ScenarioAttach")
CB2_KIND(ScenarioPush, "ScenarioPush")
CB2_KIND(ScenarioEventFeed, "ScenarioEventFeed")
CB2_KIND(ScenarioAck, "ScenarioAck")
CB2_KIND(TutorialPrompt, "TutorialPrompt")
#undef CB2_KIND

json body(const msg::JoinLobby& m) {
  json quals = json::array();
  for (Role r : m.qualifications) quals.push_back(to_string(r));
  return {{"lobby_id", m.lobby_id},
          {"display_name", m.display_name},
          {"qualifications", quals},
          {"is_bot", m.is_bot},
          {"record", m.record}};
}
json body(const msg::PlayerAction& m) { return {{"action", m.action}}; }
json body(const msg::LeaveGame&) { return json::object(); }
json body(const msg::Pong&) { return json::object(); }
json body(const msg::Joined& m) { return {{"queue_position", m.queue_position}}; }
json body(const msg::Paired& m) { return {{"game_id", m.game_id}, {"role", to_string(m.role)}}; }
json body(const msg::StateSync& m) { return {{"observation", m.observation}, {"in_reply_to", m.in_reply_to}}; }
json body(const msg::TurnUpdate& m) { return {{"turn", m.turn}}; }
json body(const msg::InstructionUpdate& m) { return {{"instructions", m.instructions}}; }
json body(const msg::GameOver& m) { return {{"score", m.score}, {"abandoned", m.abandoned}}; }
json body(const msg::Rejected& m) { return {{"reason", m.reason}, {"in_reply_to", m.in_reply_to}}; }
json body(const msg::Ping&) { return json::object(); }
json body(const msg::Error& m) { return {{"code", m.code}, {"message", m.message}}; }
json body(const msg::ScenarioAttach& m) { return {{"game_id", m.game_id}}; }
json body(const msg::ScenarioPush& m) { return {{"edit", m.edit}}; }
json body(const msg::ScenarioEventFeed& m) { return {{"event", m.event}}; }
json body(const msg::ScenarioAck& m) {
  return {{"ok", m.ok}, {"reason", m.reason}, {"in_reply_to", m.in_reply_to}};
}
json body(const msg::TutorialPrompt& m) { return {{"index", m.index}, {"text", m.text}}; }

void read(const json& p, msg::JoinLobby& m) {
  m.lobby_id = p.at("lobby_id").get<std::string>();
  m.display_name = p.at("display_name").get<std::string>();
  m.qualifications.clear();
  for (const auto& q : p.at("qualifications")) m.qualifications.push_back(parse_role(q.get<std::string>()));
  m.is_bot = p.at("is_bot").get<bool>();
  m.record = p.at("record").get<bool>();
}
void read(const json& p, msg::PlayerAction& m) { m.action = p.at("action").get<Action>(); }
void read(const json&, msg::LeaveGame&) {}
void read(const json&, msg::Pong&) {}
void read(const json& p, msg::Joined& m) { m.queue_position = p.at("queue_position").get<int>(); }
void read(const json& p, msg::Paired& m) {
  m.game_id = p.at("game_id").get<GameId>();
  m.role = parse_role(p.at("role").get<std::string>());
}
void read(const json& p, msg::StateSync& m) {
  m.observation = p.at("observation").get<Observation>();
  m.in_reply_to = p.at("in_reply_to").get<std::int64_t>();
}
void read(const json& p, msg::TurnUpdate& m) { m.turn = p.at("turn").get<TurnState>(); }
void read(const json& p, msg::InstructionUpdate& m) {
  m.instructions = p.at("instructions").get<std::vector<Instruction>>();
}
void read(const json& p, msg::GameOver& m) {
  m.score = p.at("score").get<int>();
  m.abandoned = p.at("abandoned").get<bool>();
}
void read(const json& p, msg::Rejected& m) {
  m.reason = p.at("reason").get<std::string>();
  m.in_reply_to = p.at("in_reply_to").get<std::int64_t>();
}
void read(const json&, msg::Ping&) {}
void read(const json& p, msg::Error& m) {
  m.code = p.at("code").get<std::string>();
  m.message = p.at("message").get<std::string>();
}
void read(const json& p, msg::ScenarioAttach& m) { m.game_id = p.at("game_id").get<GameId>(); }
void read(const json& p, msg::ScenarioPush& m) { m.edit = p.at("edit").get<StateEdit>(); }
void read(const json& p, msg::ScenarioEventFeed& m) { m.event = p.at("event").get<GameEvent>(); }
void read(const json& p, msg::ScenarioAck& m) {
  m.ok = p.at("ok").get<bool>();
  m.reason = p.at("reason").get<std::string>();
  m.in_reply_to = p.at("in_reply_to").get<std::int64_t>();
}
void read(const json& p, msg::TutorialPrompt& m) {
  m.index = p.at("index").get<int>();
  m.text = p.at("text").get<std::string>();
}

template <std::size_t I = 0>
bool read_kind(std::string_view kind, const json& p, Payload& out) {
  if constexpr (I == std::variant_size_v<Payload>) {
    return false;
  } else {
    using T = std::variant_alternative_t<I, Payload>;
    if (KindOf<T>::name == kind) {
      T value;
      read(p, value);
      out = std::move(value);
      return true;
    }
    return read_kind<I + 1>(kind, p, out);
  }
}

template <std::size_t... I>
std::vector<std::string_view> names(std::index_sequence<I...>) {
  return {KindOf<std::variant_alternative_t<I, Payload>>::name...};
}

// Bracket depth outside of string literals; keeps pathological input away from the parser.
bool too_deep(std::string_view s) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (char c : s) {
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '[' || c == '{') {
      if (++depth > kMaxNesting) return true;
    } else if (c == ']' || c == '}') {
      --depth;
    }
  }
  return false;
}

ProtocolError error(ProtocolError::Code c, std::string detail) { return ProtocolError{c, std::move(detail)}; }

}  // namespace

std::string_view kind_name(const Payload& p) {
  return std::visit([](const auto& m) { return KindOf<std::decay_t<decltype(m)>>::name; }, p);
}

const std::vector<std::string_view>& all_kind_names() {
  static const auto all = names(std::make_index_sequence<std::variant_size_v<Payload>>{});
  return all;
}

std::string_view to_string(ProtocolError::Code c) {
  switch (c) {
    case ProtocolError::Code::ParseError: return "parse-error";
    case ProtocolError::Code::VersionMismatch: return "version-mismatch";
    case ProtocolError::Code::UnknownKind: return "unknown-kind";
  }
  return "parse-error";
}

std::string encode(const WireMessage& m) {
  json j{{"version", m.version},
         {"seq", m.seq},
         {"kind", kind_name(m.payload)},
         {"payload", std::visit([](const auto& b) { return body(b); }, m.payload)}};
  return canonical(j);
}

std::variant<WireMessage, ProtocolError> decode(std::string_view bytes) {
  using C = ProtocolError::Code;
  if (bytes.empty()) return error(C::ParseError, "empty message");
  if (bytes.size() > kMaxFrameBytes) return error(C::ParseError, "message too large");
  if (too_deep(bytes)) return error(C::ParseError, "nesting too deep");
  try {
    const json j = json::parse(bytes);
    if (!j.is_object()) return error(C::ParseError, "message is not an object");
    if (!j.contains("version") || !j.at("version").is_string()) return error(C::ParseError, "missing version");
    const auto version = j.at("version").get<std::string>();
    if (version != kProtocolVersion) return error(C::VersionMismatch, "unsupported version " + version);
    if (!j.contains("kind") || !j.at("kind").is_string()) return error(C::ParseError, "missing kind");
    if (!j.contains("seq") || !j.at("seq").is_number_integer()) return error(C::ParseError, "missing seq");
    if (!j.contains("payload") || !j.at("payload").is_object()) return error(C::ParseError, "missing payload");
    const auto kind = j.at("kind").get<std::string>();
    WireMessage m;
    m.version = version;
    m.seq = j.at("seq").get<std::int64_t>();
    if (m.seq < 0) return error(C::ParseError, "negative seq");
    if (!read_kind(kind, j.at("payload"), m.payload)) return error(C::UnknownKind, "unknown kind " + kind);
    return m;
  } catch (const std::exception& e) {
    return error(C::ParseError, e.what());
  }
}

}  // namespace cb2
