#include "cb2/serialize.hpp"

#include <array>
#include <cstdio>
#include <utility>

namespace cb2 {

namespace {

constexpr int kMaxMapSide = 512;

template <class E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<Role, 2> kRoles{{{Role::Leader, "leader"}, {Role::Follower, "follower"}}};
constexpr NameTable<Actor, 3> kActors{
    {{Actor::Leader, "leader"}, {Actor::Follower, "follower"}, {Actor::Server, "server"}}};
constexpr NameTable<ActionKind, 9> kActionKinds{{
    {ActionKind::Forward, "forward"},
    {ActionKind::Backward, "backward"},
    {ActionKind::TurnLeft, "turn_left"},
    {ActionKind::TurnRight, "turn_right"},
    {ActionKind::EndTurn, "end_turn"},
    {ActionKind::Noop, "noop"},
    {ActionKind::SendInstruction, "send_instruction"},
    {ActionKind::MarkInstructionDone, "mark_instruction_done"},
    {ActionKind::CancelInstructions, "cancel_instructions"},
}};
constexpr NameTable<InstructionStatus, 4> kStatuses{{
    {InstructionStatus::Queued, "queued"},
    {InstructionStatus::Active, "active"},
    {InstructionStatus::Done, "done"},
    {InstructionStatus::Cancelled, "cancelled"},
}};
constexpr NameTable<TurnReason, 3> kReasons{{
    {TurnReason::StepsExhausted, "steps_exhausted"},
    {TurnReason::TimerExpired, "timer_expired"},
    {TurnReason::EndTurnAction, "end_turn_action"},
}};
constexpr NameTable<Color, 6> kColors{{
    {Color::Black, "black"},
    {Color::Blue, "blue"},
    {Color::Green, "green"},
    {Color::Orange, "orange"},
    {Color::Pink, "pink"},
    {Color::Red, "red"},
}};
constexpr NameTable<Shape, 6> kShapes{{
    {Shape::Plus, "plus"},
    {Shape::Torch, "torch"},
    {Shape::Diamond, "diamond"},
    {Shape::Heart, "heart"},
    {Shape::Star, "star"},
    {Shape::Triangle, "triangle"},
}};
constexpr NameTable<Terrain, 5> kTerrains{{
    {Terrain::Grass, "grass"},
    {Terrain::Path, "path"},
    {Terrain::Water, "water"},
    {Terrain::Mountain, "mountain"},
    {Terrain::Ramp, "ramp"},
}};
constexpr NameTable<PropKind, 4> kPropKinds{{
    {PropKind::House, "house"},
    {PropKind::Tree, "tree"},
    {PropKind::Streetlight, "streetlight"},
    {PropKind::Rock, "rock"},
}};
constexpr NameTable<RoofColor, 5> kRoofs{{
    {RoofColor::Red, "red"},
    {RoofColor::Blue, "blue"},
    {RoofColor::Green, "green"},
    {RoofColor::Yellow, "yellow"},
    {RoofColor::Brown, "brown"},
}};

constexpr std::array<char, 5> kTerrainChars{'g', 'p', 'w', 'm', 'r'};

template <class E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  throw SerializationError("enum value without a name");
}

template <class E, std::size_t N>
E parse_name(const NameTable<E, N>& table, std::string_view name, const char* what) {
  for (const auto& [e, n] : table) {
    if (n == name) return e;
  }
  throw SerializationError(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

template <class E, std::size_t N>
E parse_field(const NameTable<E, N>& table, const json& j, const char* key) {
  return parse_name(table, j.at(key).get<std::string>(), key);
}

void require_object(const json& j, const char* what) {
  if (!j.is_object()) throw SerializationError(std::string(what) + " must be an object");
}

int bounded_int(const json& j, const char* key, int lo, int hi) {
  const auto v = j.at(key).get<std::int64_t>();
  if (v < lo || v > hi) {
    throw SerializationError(std::string(key) + " out of range");
  }
  return static_cast<int>(v);
}

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

std::string_view to_string(Role r) { return name_of(kRoles, r); }
std::string_view to_string(Actor a) { return name_of(kActors, a); }
std::string_view to_string(ActionKind k) { return name_of(kActionKinds, k); }
std::string_view to_string(InstructionStatus s) { return name_of(kStatuses, s); }
std::string_view to_string(TurnReason r) { return name_of(kReasons, r); }
std::string_view to_string(Color c) { return name_of(kColors, c); }
std::string_view to_string(Shape s) { return name_of(kShapes, s); }
std::string_view to_string(Terrain t) { return name_of(kTerrains, t); }
std::string_view to_string(PropKind k) { return name_of(kPropKinds, k); }

Role parse_role(std::string_view s) { return parse_name(kRoles, s, "role"); }
ActionKind parse_action_kind(std::string_view s) { return parse_name(kActionKinds, s, "action"); }

void to_json(json& j, const HexCoord& c) { j = json::array({c.q, c.r}); }

void from_json(const json& j, HexCoord& c) {
  if (!j.is_array() || j.size() != 2) throw SerializationError("cell must be [q, r]");
  c.q = j.at(0).get<int>();
  c.r = j.at(1).get<int>();
}

void to_json(json& j, const Pose& p) { j = json{{"cell", p.cell}, {"heading", p.heading.value()}}; }

void from_json(const json& j, Pose& p) {
  require_object(j, "pose");
  p.cell = j.at("cell").get<HexCoord>();
  p.heading = Heading(bounded_int(j, "heading", 0, 5));
}

void to_json(json& j, const CardFace& f) {
  j = json{{"color", to_string(f.color)}, {"shape", to_string(f.shape)}, {"count", f.count}};
}

void from_json(const json& j, CardFace& f) {
  require_object(j, "card face");
  f.color = parse_field(kColors, j, "color");
  f.shape = parse_field(kShapes, j, "shape");
  f.count = bounded_int(j, "count", 1, kMaxCardCount);
}

void to_json(json& j, const Card& c) {
  j = json{{"id", c.id}, {"cell", c.cell}, {"face", c.face}, {"selected", c.selected}};
}

void from_json(const json& j, Card& c) {
  require_object(j, "card");
  c.id = j.at("id").get<int>();
  c.cell = j.at("cell").get<HexCoord>();
  c.face = j.at("face").get<CardFace>();
  c.selected = j.at("selected").get<bool>();
}

void to_json(json& j, const Prop& p) {
  j = json{{"kind", to_string(p.kind)}, {"cell", p.cell}};
  if (p.house) j["house"] = json{{"roof", name_of(kRoofs, p.house->roof)}, {"floors", p.house->floors}};
}

void from_json(const json& j, Prop& p) {
  require_object(j, "prop");
  p.kind = parse_field(kPropKinds, j, "kind");
  p.cell = j.at("cell").get<HexCoord>();
  p.house.reset();
  if (j.contains("house")) {
    const json& h = j.at("house");
    p.house = HouseVariant{parse_field(kRoofs, h, "roof"), bounded_int(h, "floors", 1, 9)};
  }
}

void to_json(json& j, const GameMap& m) {
  json terrain = json::array();
  json elevation = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    std::string trow;
    std::string erow;
    for (int col = 0; col < m.cols(); ++col) {
      const Tile& t = m.tile(m.cell_at(r * m.cols() + col));
      trow.push_back(kTerrainChars[static_cast<std::size_t>(t.terrain)]);
      erow.push_back(static_cast<char>('0' + t.elevation));
    }
    terrain.push_back(trow);
    elevation.push_back(erow);
  }
  j = json{{"rows", m.rows()},
           {"cols", m.cols()},
           {"terrain", terrain},
           {"elevation", elevation},
           {"props", m.props()},
           {"initial_cards", m.initial_cards},
           {"leader_spawn", m.leader_spawn},
           {"follower_spawn", m.follower_spawn},
           {"seed", m.seed},
           {"seed_offset", m.seed_offset}};
}

void from_json(const json& j, GameMap& m) {
  require_object(j, "map");
  const int rows = bounded_int(j, "rows", 1, kMaxMapSide);
  const int cols = bounded_int(j, "cols", 1, kMaxMapSide);
  GameMap out(rows, cols);
  const json& terrain = j.at("terrain");
  const json& elevation = j.at("elevation");
  if (!terrain.is_array() || !elevation.is_array() || terrain.size() != static_cast<std::size_t>(rows) ||
      elevation.size() != static_cast<std::size_t>(rows)) {
    throw SerializationError("map tile rows do not match dimensions");
  }
  for (int r = 0; r < rows; ++r) {
    const auto trow = terrain.at(static_cast<std::size_t>(r)).get<std::string>();
    const auto erow = elevation.at(static_cast<std::size_t>(r)).get<std::string>();
    if (trow.size() != static_cast<std::size_t>(cols) || erow.size() != static_cast<std::size_t>(cols)) {
      throw SerializationError("map tile row has the wrong length");
    }
    for (int col = 0; col < cols; ++col) {
      Tile t;
      const char tc = trow[static_cast<std::size_t>(col)];
      const char ec = erow[static_cast<std::size_t>(col)];
      std::size_t k = 0;
      while (k < kTerrainChars.size() && kTerrainChars[k] != tc) ++k;
      if (k == kTerrainChars.size()) throw SerializationError("unknown terrain code");
      if (ec < '0' || ec > '9') throw SerializationError("elevation must be a digit");
      t.terrain = static_cast<Terrain>(k);
      t.elevation = ec - '0';
      out.set_tile(out.cell_at(r * cols + col), t);
    }
  }
  for (const auto& pj : j.at("props")) {
    const auto p = pj.get<Prop>();
    if (!out.in_bounds(p.cell)) throw SerializationError("prop out of bounds");
    out.set_prop(p);
  }
  out.initial_cards = j.at("initial_cards").get<std::vector<Card>>();
  out.leader_spawn = j.at("leader_spawn").get<HexCoord>();
  out.follower_spawn = j.at("follower_spawn").get<HexCoord>();
  out.seed = j.at("seed").get<std::uint64_t>();
  out.seed_offset = j.at("seed_offset").get<std::uint32_t>();
  m = std::move(out);
}

void to_json(json& j, const GameConfig& c) {
  j = json{{"leader_steps_per_turn", c.leader_steps_per_turn},
           {"follower_steps_per_turn", c.follower_steps_per_turn},
           {"leader_turn_seconds", c.leader_turn_seconds},
           {"follower_turn_seconds", c.follower_turn_seconds},
           {"initial_turns", c.initial_turns},
           {"turn_bonus_schedule", c.turn_bonus_schedule},
           {"card_count", c.card_count},
           {"fog_range", c.fog_range},
           {"fov_degrees", c.fov_degrees},
           {"hide_card_patterns", c.hide_card_patterns},
           {"num_colors", c.num_colors},
           {"num_shapes", c.num_shapes}};
}

void from_json(const json& j, GameConfig& c) {
  require_object(j, "config");
  GameConfig d;
  const auto get_int = [&](const char* key, int fallback) {
    return j.contains(key) ? j.at(key).get<int>() : fallback;
  };
  c.leader_steps_per_turn = get_int("leader_steps_per_turn", d.leader_steps_per_turn);
  c.follower_steps_per_turn = get_int("follower_steps_per_turn", d.follower_steps_per_turn);
  c.leader_turn_seconds = get_int("leader_turn_seconds", d.leader_turn_seconds);
  c.follower_turn_seconds = get_int("follower_turn_seconds", d.follower_turn_seconds);
  c.initial_turns = get_int("initial_turns", d.initial_turns);
  c.turn_bonus_schedule = j.contains("turn_bonus_schedule")
                              ? j.at("turn_bonus_schedule").get<std::vector<int>>()
                              : d.turn_bonus_schedule;
  c.card_count = get_int("card_count", d.card_count);
  c.fog_range = get_int("fog_range", d.fog_range);
  c.fov_degrees = j.contains("fov_degrees") ? j.at("fov_degrees").get<double>() : d.fov_degrees;
  c.hide_card_patterns =
      j.contains("hide_card_patterns") ? j.at("hide_card_patterns").get<bool>() : d.hide_card_patterns;
  c.num_colors = get_int("num_colors", d.num_colors);
  c.num_shapes = get_int("num_shapes", d.num_shapes);
}

void to_json(json& j, const GenConfig& c) {
  j = json{{"rows", c.rows},
           {"cols", c.cols},
           {"town_count", c.town_count},
           {"town_size_min", c.town_size_min},
           {"town_size_max", c.town_size_max},
           {"town_radius", c.town_radius},
           {"lake_count", c.lake_count},
           {"lake_size_min", c.lake_size_min},
           {"lake_size_max", c.lake_size_max},
           {"mountain_count", c.mountain_count},
           {"mountain_size_min", c.mountain_size_min},
           {"mountain_size_max", c.mountain_size_max},
           {"ramps_per_mountain", c.ramps_per_mountain},
           {"tree_density", c.tree_density},
           {"rock_density", c.rock_density},
           {"streetlight_density", c.streetlight_density},
           {"card_count", c.card_count},
           {"seed", c.seed}};
}

void from_json(const json& j, GenConfig& c) {
  require_object(j, "generation config");
  const auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("rows", c.rows);
  get("cols", c.cols);
  get("town_count", c.town_count);
  get("town_size_min", c.town_size_min);
  get("town_size_max", c.town_size_max);
  get("town_radius", c.town_radius);
  get("lake_count", c.lake_count);
  get("lake_size_min", c.lake_size_min);
  get("lake_size_max", c.lake_size_max);
  get("mountain_count", c.mountain_count);
  get("mountain_size_min", c.mountain_size_min);
  get("mountain_size_max", c.mountain_size_max);
  get("ramps_per_mountain", c.ramps_per_mountain);
  get("tree_density", c.tree_density);
  get("rock_density", c.rock_density);
  get("streetlight_density", c.streetlight_density);
  get("card_count", c.card_count);
  get("seed", c.seed);
}

void to_json(json& j, const TurnState& t) {
  j = json{{"active_role", to_string(t.active_role)},
           {"turns_remaining", t.turns_remaining},
           {"steps_remaining", t.steps_remaining},
           {"turn_deadline", t.turn_deadline},
           {"score", t.score},
           {"sets_collected", t.sets_collected},
           {"turn_number", t.turn_number}};
}

void from_json(const json& j, TurnState& t) {
  require_object(j, "turn state");
  t.active_role = parse_field(kRoles, j, "active_role");
  t.turns_remaining = j.at("turns_remaining").get<int>();
  t.steps_remaining = j.at("steps_remaining").get<int>();
  t.turn_deadline = j.at("turn_deadline").get<Timestamp>();
  t.score = j.at("score").get<int>();
  t.sets_collected = j.at("sets_collected").get<int>();
  t.turn_number = j.at("turn_number").get<int>();
}

void to_json(json& j, const Instruction& i) {
  j = json{{"id", i.id},
           {"text", i.text},
           {"status", to_string(i.status)},
           {"issued_turn", i.issued_turn}};
}

void from_json(const json& j, Instruction& i) {
  require_object(j, "instruction");
  i.id = j.at("id").get<int>();
  i.text = j.at("text").get<std::string>();
  i.status = parse_field(kStatuses, j, "status");
  i.issued_turn = j.at("issued_turn").get<int>();
}

void to_json(json& j, const Action& a) {
  j = json{{"kind", to_string(a.kind)}};
  if (a.kind == ActionKind::SendInstruction) j["text"] = a.text;
}

void from_json(const json& j, Action& a) {
  require_object(j, "action");
  a.kind = parse_field(kActionKinds, j, "kind");
  a.text = a.kind == ActionKind::SendInstruction ? j.at("text").get<std::string>() : std::string();
}

void to_json(json& j, const GameState& s) {
  j = json{{"map", s.map},
           {"config", s.config},
           {"leader_pose", s.leader_pose},
           {"follower_pose", s.follower_pose},
           {"cards", s.cards},
           {"turn", s.turn},
           {"instructions", s.instructions},
           {"rng", json{{"seed", s.rng.seed()}, {"counter", s.rng.counter()}}},
           {"next_card_id", s.next_card_id},
           {"next_instruction_id", s.next_instruction_id},
           {"over", s.over},
           {"abandoned", s.abandoned}};
}

void from_json(const json& j, GameState& s) {
  require_object(j, "state");
  s.map = j.at("map").get<GameMap>();
  s.config = j.at("config").get<GameConfig>();
  s.leader_pose = j.at("leader_pose").get<Pose>();
  s.follower_pose = j.at("follower_pose").get<Pose>();
  s.cards = j.at("cards").get<std::vector<Card>>();
  s.turn = j.at("turn").get<TurnState>();
  s.instructions = j.at("instructions").get<std::vector<Instruction>>();
  const json& rng = j.at("rng");
  s.rng = DeterministicRng(rng.at("seed").get<std::uint64_t>(), rng.at("counter").get<std::uint64_t>());
  s.next_card_id = j.at("next_card_id").get<int>();
  s.next_instruction_id = j.at("next_instruction_id").get<int>();
  s.over = j.at("over").get<bool>();
  s.abandoned = j.at("abandoned").get<bool>();
}

void to_json(json& j, const ObservedTile& t) {
  j = json{{"cell", t.cell}, {"terrain", to_string(t.tile.terrain)}, {"elevation", t.tile.elevation}};
}

void from_json(const json& j, ObservedTile& t) {
  require_object(j, "tile");
  t.cell = j.at("cell").get<HexCoord>();
  t.tile.terrain = parse_field(kTerrains, j, "terrain");
  t.tile.elevation = bounded_int(j, "elevation", 0, 9);
}

void to_json(json& j, const CardView& c) {
  j = json{{"id", c.id}, {"cell", c.cell}, {"selected", c.selected}};
  put_optional(j, "face", c.face);
}

void from_json(const json& j, CardView& c) {
  require_object(j, "card view");
  c.id = j.at("id").get<int>();
  c.cell = j.at("cell").get<HexCoord>();
  c.selected = j.at("selected").get<bool>();
  c.face = get_optional<CardFace>(j, "face");
}

void to_json(json& j, const PublicRules& r) {
  j = json{{"leader_steps_per_turn", r.leader_steps_per_turn},
           {"follower_steps_per_turn", r.follower_steps_per_turn},
           {"fog_range", r.fog_range},
           {"fov_degrees", r.fov_degrees},
           {"hide_card_patterns", r.hide_card_patterns}};
}

void from_json(const json& j, PublicRules& r) {
  require_object(j, "rules");
  r.leader_steps_per_turn = j.at("leader_steps_per_turn").get<int>();
  r.follower_steps_per_turn = j.at("follower_steps_per_turn").get<int>();
  r.fog_range = j.at("fog_range").get<int>();
  r.fov_degrees = j.at("fov_degrees").get<double>();
  r.hide_card_patterns = j.at("hide_card_patterns").get<bool>();
}

void to_json(json& j, const Observation& o) {
  j = json{{"role", to_string(o.role)},
           {"rows", o.rows},
           {"cols", o.cols},
           {"tiles", o.tiles},
           {"props", o.props},
           {"cards", o.cards},
           {"own_pose", o.own_pose},
           {"turn", o.turn},
           {"instructions", o.instructions},
           {"rules", o.rules},
           {"game_over", o.game_over},
           {"abandoned", o.abandoned}};
  put_optional(j, "other_pose", o.other_pose);
  put_optional(j, "selection_invalid", o.selection_invalid);
}

void from_json(const json& j, Observation& o) {
  require_object(j, "observation");
  o.role = parse_field(kRoles, j, "role");
  o.rows = bounded_int(j, "rows", 0, kMaxMapSide);
  o.cols = bounded_int(j, "cols", 0, kMaxMapSide);
  o.tiles = j.at("tiles").get<std::vector<ObservedTile>>();
  o.props = j.at("props").get<std::vector<Prop>>();
  o.cards = j.at("cards").get<std::vector<CardView>>();
  o.own_pose = j.at("own_pose").get<Pose>();
  o.other_pose = get_optional<Pose>(j, "other_pose");
  o.turn = j.at("turn").get<TurnState>();
  o.instructions = j.at("instructions").get<std::vector<Instruction>>();
  o.rules = j.at("rules").get<PublicRules>();
  o.selection_invalid = get_optional<bool>(j, "selection_invalid");
  o.game_over = j.at("game_over").get<bool>();
  o.abandoned = j.at("abandoned").get<bool>();
}

void to_json(json& j, const StateEdit& e) {
  j = json::object();
  put_optional(j, "tiles", e.tiles);
  put_optional(j, "props", e.props);
  put_optional(j, "cards", e.cards);
  put_optional(j, "leader_pose", e.leader_pose);
  put_optional(j, "follower_pose", e.follower_pose);
}

void from_json(const json& j, StateEdit& e) {
  require_object(j, "state edit");
  e.tiles = get_optional<std::vector<ObservedTile>>(j, "tiles");
  e.props = get_optional<std::vector<Prop>>(j, "props");
  e.cards = get_optional<std::vector<Card>>(j, "cards");
  e.leader_pose = get_optional<Pose>(j, "leader_pose");
  e.follower_pose = get_optional<Pose>(j, "follower_pose");
}

std::string_view event_kind_name(const EventBody& body) {
  struct Namer {
    std::string_view operator()(const event::GameStart&) const { return "GameStart"; }
    std::string_view operator()(const event::Move&) const { return "Move"; }
    std::string_view operator()(const event::CardToggle&) const { return "CardToggle"; }
    std::string_view operator()(const event::SetCompleted&) const { return "SetCompleted"; }
    std::string_view operator()(const event::InstructionSent&) const { return "InstructionSent"; }
    std::string_view operator()(const event::InstructionActivated&) const { return "InstructionActivated"; }
    std::string_view operator()(const event::InstructionDone&) const { return "InstructionDone"; }
    std::string_view operator()(const event::InstructionCancelled&) const { return "InstructionCancelled"; }
    std::string_view operator()(const event::TimerExpired&) const { return "TimerExpired"; }
    std::string_view operator()(const event::TurnTransition&) const { return "TurnTransition"; }
    std::string_view operator()(const event::Abandoned&) const { return "Abandoned"; }
    std::string_view operator()(const event::GameOver&) const { return "GameOver"; }
    std::string_view operator()(const event::ScenarioEdit&) const { return "ScenarioEdit"; }
  };
  return std::visit(Namer{}, body);
}

namespace {

struct PayloadWriter {
  json operator()(const event::GameStart& e) const {
    json j{{"map", e.map}, {"config", e.config}, {"seed", e.seed}, {"start_time", e.start_time}};
    if (e.initial_state) j["initial_state"] = *e.initial_state;
    return j;
  }
  json operator()(const event::Move& e) const {
    return {{"role", to_string(e.role)},
            {"action", to_string(e.action)},
            {"from", e.from},
            {"to", e.to},
            {"steps_remaining", e.steps_remaining}};
  }
  json operator()(const event::CardToggle& e) const {
    return {{"card_id", e.card_id}, {"selected", e.selected}};
  }
  json operator()(const event::SetCompleted& e) const {
    return {{"removed", e.removed},
            {"spawned", e.spawned},
            {"score", e.score},
            {"bonus_turns", e.bonus_turns},
            {"rng_counter", e.rng_counter}};
  }
  json operator()(const event::InstructionSent& e) const {
    return {{"id", e.id}, {"text", e.text}, {"issued_turn", e.issued_turn}};
  }
  json operator()(const event::InstructionActivated& e) const { return {{"id", e.id}}; }
  json operator()(const event::InstructionDone& e) const { return {{"id", e.id}}; }
  json operator()(const event::InstructionCancelled& e) const { return {{"ids", e.ids}}; }
  json operator()(const event::TimerExpired& e) const { return {{"turn_number", e.turn_number}}; }
  json operator()(const event::TurnTransition& e) const {
    return {{"reason", to_string(e.reason)},
            {"from_role", to_string(e.from_role)},
            {"to_role", to_string(e.to_role)},
            {"turns_remaining", e.turns_remaining},
            {"steps_remaining", e.steps_remaining},
            {"deadline", e.deadline},
            {"turn_number", e.turn_number}};
  }
  json operator()(const event::Abandoned& e) const { return {{"role", to_string(e.role)}}; }
  json operator()(const event::GameOver& e) const { return {{"score", e.score}}; }
  json operator()(const event::ScenarioEdit& e) const { return {{"edit", e.edit}}; }
};

EventBody read_payload(std::string_view kind, const json& p) {
  require_object(p, "event payload");
  if (kind == "GameStart") {
    event::GameStart e;
    e.map = p.at("map").get<GameMap>();
    e.config = p.at("config").get<GameConfig>();
    e.seed = p.at("seed").get<std::uint64_t>();
    e.start_time = p.at("start_time").get<Timestamp>();
    if (p.contains("initial_state")) {
      e.initial_state = std::make_shared<const GameState>(p.at("initial_state").get<GameState>());
    }
    return e;
  }
  if (kind == "Move") {
    return event::Move{parse_field(kRoles, p, "role"), parse_field(kActionKinds, p, "action"),
                       p.at("from").get<Pose>(), p.at("to").get<Pose>(),
                       p.at("steps_remaining").get<int>()};
  }
  if (kind == "CardToggle") {
    return event::CardToggle{p.at("card_id").get<int>(), p.at("selected").get<bool>()};
  }
  if (kind == "SetCompleted") {
    return event::SetCompleted{p.at("removed").get<std::vector<int>>(),
                               p.at("spawned").get<std::vector<Card>>(), p.at("score").get<int>(),
                               p.at("bonus_turns").get<int>(),
                               p.at("rng_counter").get<std::uint64_t>()};
  }
  if (kind == "InstructionSent") {
    return event::InstructionSent{p.at("id").get<int>(), p.at("text").get<std::string>(),
                                  p.at("issued_turn").get<int>()};
  }
  if (kind == "InstructionActivated") return event::InstructionActivated{p.at("id").get<int>()};
  if (kind == "InstructionDone") return event::InstructionDone{p.at("id").get<int>()};
  if (kind == "InstructionCancelled") {
    return event::InstructionCancelled{p.at("ids").get<std::vector<int>>()};
  }
  if (kind == "TimerExpired") return event::TimerExpired{p.at("turn_number").get<int>()};
  if (kind == "TurnTransition") {
    return event::TurnTransition{parse_field(kReasons, p, "reason"),
                                 parse_field(kRoles, p, "from_role"),
                                 parse_field(kRoles, p, "to_role"),
                                 p.at("turns_remaining").get<int>(),
                                 p.at("steps_remaining").get<int>(),
                                 p.at("deadline").get<Timestamp>(),
                                 p.at("turn_number").get<int>()};
  }
  if (kind == "Abandoned") return event::Abandoned{parse_field(kRoles, p, "role")};
  if (kind == "GameOver") return event::GameOver{p.at("score").get<int>()};
  if (kind == "ScenarioEdit") return event::ScenarioEdit{p.at("edit").get<StateEdit>()};
  throw SerializationError("unknown event kind '" + std::string(kind) + "'");
}

}  // namespace

void to_json(json& j, const GameEvent& e) {
  j = json{{"game_id", e.game_id},
           {"seq", e.seq},
           {"wall_time", e.wall_time},
           {"actor", to_string(e.actor)},
           {"kind", event_kind_name(e.body)},
           {"payload", std::visit(PayloadWriter{}, e.body)}};
}

void from_json(const json& j, GameEvent& e) {
  require_object(j, "event");
  e.game_id = j.at("game_id").get<GameId>();
  e.seq = j.at("seq").get<std::int64_t>();
  e.wall_time = j.at("wall_time").get<Timestamp>();
  e.actor = parse_field(kActors, j, "actor");
  e.body = read_payload(j.at("kind").get<std::string>(), j.at("payload"));
}

std::string canonical(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string state_hash(const GameState& state) { return fnv1a_hex(to_canonical(state)); }

}  // namespace cb2
