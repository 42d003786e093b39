#include "cb2/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cb2/mapgen.hpp"

namespace cb2 {

namespace {

template <class T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw ScenarioError(name, "missing");
  try {
    return j.at(name).get<T>();
  } catch (const std::exception& e) {
    throw ScenarioError(name, e.what());
  }
}

template <class T>
T field_or(const json& j, const char* name, T fallback) {
  return j.contains(name) ? field<T>(j, name) : std::move(fallback);
}

}  // namespace

GameState load_scenario(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ScenarioError("scenario", e.what());
  }
  if (!j.is_object()) throw ScenarioError("scenario", "not an object");

  GameState s;
  s.map = field<GameMap>(j, "map");
  s.leader_pose = field<Pose>(j, "leader_pose");
  s.follower_pose = field<Pose>(j, "follower_pose");
  s.cards = field_or(j, "cards", s.map.initial_cards);
  std::sort(s.cards.begin(), s.cards.end(), [](const Card& a, const Card& b) { return a.id < b.id; });

  GameConfig defaults;
  defaults.card_count = static_cast<int>(s.cards.size());
  s.config = field_or(j, "config", defaults);

  TurnState fresh;
  fresh.turns_remaining = s.config.initial_turns;
  fresh.steps_remaining = s.config.leader_steps_per_turn;
  fresh.turn_deadline = 1000 * static_cast<Timestamp>(s.config.leader_turn_seconds);
  s.turn = field_or(j, "turn", fresh);
  s.instructions = field_or(j, "instructions", std::vector<Instruction>{});
  if (j.contains("rng")) {
    const json& rng = j.at("rng");
    try {
      s.rng = DeterministicRng(rng.at("seed").get<std::uint64_t>(), rng.at("counter").get<std::uint64_t>());
    } catch (const std::exception& e) {
      throw ScenarioError("rng", e.what());
    }
  } else {
    s.rng = DeterministicRng(s.map.seed);
  }
  int next_card = 0;
  for (const auto& c : s.cards) next_card = std::max(next_card, c.id + 1);
  int next_instruction = 0;
  for (const auto& i : s.instructions) next_instruction = std::max(next_instruction, i.id + 1);
  s.next_card_id = field_or(j, "next_card_id", next_card);
  s.next_instruction_id = field_or(j, "next_instruction_id", next_instruction);
  s.over = field_or(j, "over", false);
  s.abandoned = field_or(j, "abandoned", false);

  if (s.next_card_id < next_card) throw ScenarioError("next_card_id", "not above every card id");
  if (s.next_instruction_id < next_instruction) {
    throw ScenarioError("next_instruction_id", "not above every instruction id");
  }
  const auto report = validate_map(s.map);
  if (!report.ok) throw ScenarioError("map", report.failures.front());
  if (auto err = check_state_invariants(s)) {
    const auto colon = err->find(':');
    throw ScenarioError(err->substr(0, colon), colon == std::string::npos ? *err : err->substr(colon + 2));
  }
  return s;
}

GameState load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("file", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string export_scenario(const GameState& state) { return to_canonical(state); }

std::optional<std::string> validate_edit(const GameState& state, const StateEdit& edit) {
  if (edit.empty()) return "empty edit";
  if (state.over) return "game over";
  if (edit.tiles) {
    for (const auto& t : *edit.tiles) {
      if (!state.map.in_bounds(t.cell)) return "tiles: cell out of bounds";
    }
  }
  if (edit.props) {
    for (const auto& p : *edit.props) {
      if (!state.map.in_bounds(p.cell)) return "props: cell out of bounds";
    }
  }
  GameState next = state;
  apply_edit(next, edit);
  return check_state_invariants(next);
}

}  // namespace cb2
