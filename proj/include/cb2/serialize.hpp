#pragma once

// Canonical structured-text form of every persisted or transmitted type.
//
// The form is JSON with lexicographically sorted object keys and no
// insignificant whitespace. Enums are lower_snake strings, coordinates are
// [q, r] pairs, and map tiles are packed as one string per row:
//   terrain:   g=grass p=path w=water m=mountain r=ramp
//   elevation: one decimal digit per cell
// Parsing is strict: unknown enum names, missing fields and out-of-range
// values raise SerializationError.

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cb2/game_events.hpp"
#include "cb2/game_state.hpp"
#include "cb2/mapgen.hpp"

namespace cb2 {

using json = nlohmann::json;

class SerializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void to_json(json& j, const HexCoord& c);
void from_json(const json& j, HexCoord& c);
void to_json(json& j, const Pose& p);
void from_json(const json& j, Pose& p);
void to_json(json& j, const CardFace& f);
void from_json(const json& j, CardFace& f);
void to_json(json& j, const Card& c);
void from_json(const json& j, Card& c);
void to_json(json& j, const Prop& p);
void from_json(const json& j, Prop& p);
void to_json(json& j, const GameMap& m);
void from_json(const json& j, GameMap& m);
void to_json(json& j, const GameConfig& c);
void from_json(const json& j, GameConfig& c);
void to_json(json& j, const GenConfig& c);
void from_json(const json& j, GenConfig& c);
void to_json(json& j, const TurnState& t);
void from_json(const json& j, TurnState& t);
void to_json(json& j, const Instruction& i);
void from_json(const json& j, Instruction& i);
void to_json(json& j, const Action& a);
void from_json(const json& j, Action& a);
void to_json(json& j, const GameState& s);
void from_json(const json& j, GameState& s);
void to_json(json& j, const ObservedTile& t);
void from_json(const json& j, ObservedTile& t);
void to_json(json& j, const CardView& c);
void from_json(const json& j, CardView& c);
void to_json(json& j, const PublicRules& r);
void from_json(const json& j, PublicRules& r);
void to_json(json& j, const Observation& o);
void from_json(const json& j, Observation& o);
void to_json(json& j, const StateEdit& e);
void from_json(const json& j, StateEdit& e);
void to_json(json& j, const GameEvent& e);
void from_json(const json& j, GameEvent& e);

std::string_view to_string(Role r);
std::string_view to_string(Actor a);
std::string_view to_string(ActionKind k);
std::string_view to_string(InstructionStatus s);
std::string_view to_string(TurnReason r);
std::string_view to_string(Color c);
std::string_view to_string(Shape s);
std::string_view to_string(Terrain t);
std::string_view to_string(PropKind k);

Role parse_role(std::string_view s);
ActionKind parse_action_kind(std::string_view s);

/// Serializes with sorted keys and no whitespace; invalid UTF-8 is replaced.
std::string canonical(const json& j);

template <class T>
std::string to_canonical(const T& value) {
  json j = value;
  return canonical(j);
}

/// Parses text and converts it, mapping every failure to SerializationError.
template <class T>
T from_canonical(std::string_view text) {
  try {
    return json::parse(text).get<T>();
  } catch (const SerializationError&) {
    throw;
  } catch (const std::exception& e) {
    throw SerializationError(e.what());
  }
}

/// 64-bit FNV-1a digest as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Digest of the canonical serialization of a state.
std::string state_hash(const GameState& state);

}  // namespace cb2
