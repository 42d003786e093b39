#include <doctest.h>

#include "cb2/gamecore.hpp"
#include "cb2/serialize.hpp"
#include "unit/fixtures.hpp"

using namespace cb2;

TEST_CASE("canonical form sorts keys and drops whitespace") {
  json j = json::parse(R"({"b": 1, "a": {"d": [1, 2], "c": null}})");
  CHECK(canonical(j) == R"({"a":{"c":null,"d":[1,2]},"b":1})");
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("map round trip") {
  const GameMap m = generate_map(fixture::small_gen(3));
  const auto text = to_canonical(m);
  const auto back = from_canonical<GameMap>(text);
  CHECK(back == m);
  CHECK(to_canonical(back) == text);
  const json j = json::parse(text);
  CHECK(j["terrain"].size() == 25);
  CHECK(j["terrain"][0].get<std::string>().size() == 25);
}

TEST_CASE("state round trip through play") {
  const GameMap m = generate_map(fixture::small_gen(5));
  GameState s = new_game(m, GameConfig{}, 5);
  s = apply_action(s, Role::Leader, Action::send_instruction("turn left; forward 2 \"quoted\""), 0).state;
  s = apply_action(s, Role::Leader, Action::end_turn(), 0).state;
  const auto back = from_canonical<GameState>(to_canonical(s));
  CHECK(back == s);
  CHECK(state_hash(back) == state_hash(s));
  CHECK(state_hash(s).size() == 16);
}

TEST_CASE("events and observations round trip") {
  GameState s = fixture::open_game();
  auto r = apply_action(s, Role::Leader, Action::forward(), 0);
  r = apply_action(r.state, Role::Leader, Action::send_instruction("x"), 0);
  r = apply_action(r.state, Role::Leader, Action::end_turn(), 0);
  for (const auto& e : r.events) {
    const auto back = from_canonical<GameEvent>(to_canonical(e));
    CHECK(to_canonical(back) == to_canonical(e));
  }
  for (Role role : {Role::Leader, Role::Follower}) {
    const Observation o = observe(r.state, role);
    CHECK(to_canonical(from_canonical<Observation>(to_canonical(o))) == to_canonical(o));
  }
}

TEST_CASE("strict parsing") {
  CHECK_THROWS_AS(from_canonical<HexCoord>("[1]"), SerializationError);
  CHECK_THROWS_AS(from_canonical<HexCoord>("not json"), SerializationError);
  CHECK_THROWS_AS(from_canonical<Action>(R"({"kind":"teleport","text":""})"), SerializationError);
  CHECK_THROWS_AS(from_canonical<GameMap>(R"({"rows":100000})"), SerializationError);
  CHECK(parse_role("leader") == Role::Leader);
  CHECK_THROWS_AS(parse_role("boss"), SerializationError);
  for (ActionKind k : kAllActionKinds) CHECK(parse_action_kind(to_string(k)) == k);
}

TEST_CASE("invalid utf-8 does not throw") {
  Instruction i{1, std::string("bad \xff byte"), InstructionStatus::Active, 0};
  CHECK_NOTHROW(to_canonical(i));
}
