#include "cb2/gamecore.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <deque>
#include <limits>
#include <memory>
#include <set>

#include "cb2/mapgen.hpp"

namespace cb2 {

Timestamp system_clock_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

const Card* GameState::card_at(HexCoord c) const {
  for (const auto& card : cards) {
    if (card.cell == c) return &card;
  }
  return nullptr;
}

const Instruction* GameState::active_instruction() const {
  for (const auto& ins : instructions) {
    if (ins.status == InstructionStatus::Active) return &ins;
  }
  return nullptr;
}

std::string_view reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::WrongActor: return "wrong-actor";
    case RejectReason::IllegalMove: return "illegal-move";
    case RejectReason::NoActiveInstruction: return "no-active-instruction";
    case RejectReason::EmptyInstructionText: return "empty-instruction-text";
    case RejectReason::InstructionTooLong: return "instruction-too-long";
    case RejectReason::GameOver: return "game-over";
  }
  return "unknown";
}

namespace {

/// Accumulates events and keeps a working state in sync by applying each one.
class EventSink {
 public:
  EventSink(GameState state, Timestamp now) : state_(std::move(state)), now_(now) {}

  void emit(Actor actor, EventBody body) {
    GameEvent e;
    e.wall_time = now_;
    e.actor = actor;
    e.body = std::move(body);
    state_ = apply_event(std::move(state_), e);
    events_.push_back(std::move(e));
  }

  void append(Transition t) {
    state_ = std::move(t.state);
    for (auto& e : t.events) events_.push_back(std::move(e));
  }

  const GameState& state() const { return state_; }
  Timestamp now() const { return now_; }
  Transition finish() && { return {std::move(state_), std::move(events_)}; }

 private:
  GameState state_;
  std::vector<GameEvent> events_;
  Timestamp now_;
};

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::optional<Pose> movement_target(const GameState& s, Role role, ActionKind kind) {
  const Pose& p = s.pose_of(role);
  switch (kind) {
    case ActionKind::Forward: return Pose{neighbor(p.cell, p.heading), p.heading};
    case ActionKind::Backward: return Pose{neighbor(p.cell, p.heading.opposite()), p.heading};
    case ActionKind::TurnLeft: return Pose{p.cell, rotate(p.heading, Turn::Left)};
    case ActionKind::TurnRight: return Pose{p.cell, rotate(p.heading, Turn::Right)};
    default: return std::nullopt;
  }
}

bool has_pending_instructions(const GameState& s) {
  return std::any_of(s.instructions.begin(), s.instructions.end(), [](const Instruction& i) {
    return i.status == InstructionStatus::Active || i.status == InstructionStatus::Queued;
  });
}

std::vector<bool> reachable_from(const GameMap& map, HexCoord start) {
  std::vector<bool> seen(static_cast<std::size_t>(map.cell_count()), false);
  if (!map.in_bounds(start)) return seen;
  std::deque<HexCoord> frontier{start};
  seen[static_cast<std::size_t>(map.index_of(start))] = true;
  while (!frontier.empty()) {
    const HexCoord c = frontier.front();
    frontier.pop_front();
    for (int d = 0; d < 6; ++d) {
      const HexCoord n = neighbor(c, Heading(d));
      if (!map.in_bounds(n) || !map.can_step(c, n)) continue;
      auto idx = static_cast<std::size_t>(map.index_of(n));
      if (seen[idx]) continue;
      seen[idx] = true;
      frontier.push_back(n);
    }
  }
  return seen;
}

void run_turn_advance(EventSink& sink, TurnReason reason) {
  const GameState& s = sink.state();
  event::TurnTransition t;
  t.reason = reason;
  t.from_role = s.turn.active_role;
  t.to_role = other(s.turn.active_role);
  t.turns_remaining = std::max(0, s.turn.turns_remaining - 1);
  t.steps_remaining = s.step_budget(t.to_role);
  t.deadline = sink.now() + s.turn_millis(t.to_role);
  t.turn_number = s.turn.turn_number + 1;
  sink.emit(Actor::Server, t);
  if (sink.state().turn.turns_remaining == 0) {
    sink.emit(Actor::Server, event::GameOver{sink.state().turn.score});
  }
}

void run_resolution(EventSink& sink, Actor actor) {
  const GameState& s = sink.state();
  std::vector<Card> selected;
  for (const auto& c : s.cards) {
    if (c.selected) selected.push_back(c);
  }
  if (!is_valid_set(selected)) return;

  event::SetCompleted done;
  for (const auto& c : selected) done.removed.push_back(c.id);

  const auto from_leader = reachable_from(s.map, s.leader_pose.cell);
  const auto from_follower = reachable_from(s.map, s.follower_pose.cell);
  std::set<HexCoord> occupied{s.leader_pose.cell, s.follower_pose.cell};
  for (const auto& c : s.cards) {
    if (!c.selected) occupied.insert(c.cell);
  }
  std::vector<HexCoord> candidates;
  for (int i = 0; i < s.map.cell_count(); ++i) {
    const HexCoord cell = s.map.cell_at(i);
    const auto idx = static_cast<std::size_t>(i);
    if (!s.map.traversable(cell) || !from_leader[idx] || !from_follower[idx]) continue;
    if (occupied.contains(cell)) continue;
    candidates.push_back(cell);
  }

  DeterministicRng rng = s.rng;
  int next_id = s.next_card_id;
  for (int k = 0; k < kSetSize && !candidates.empty(); ++k) {
    const auto pick = static_cast<std::size_t>(rng.below(candidates.size()));
    Card card;
    card.id = next_id++;
    card.cell = candidates[pick];
    card.face.color = static_cast<Color>(rng.below(static_cast<std::uint64_t>(s.config.num_colors)));
    card.face.shape = static_cast<Shape>(rng.below(static_cast<std::uint64_t>(s.config.num_shapes)));
    card.face.count = 1 + static_cast<int>(rng.below(kMaxCardCount));
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
    done.spawned.push_back(card);
  }
  done.score = s.turn.score + 1;
  done.bonus_turns = s.config.bonus_for_set(s.turn.sets_collected + 1);
  done.rng_counter = rng.counter();
  sink.emit(actor, std::move(done));
}

}  // namespace

GameState new_game(const GameMap& map, const GameConfig& config, std::uint64_t seed,
                   Timestamp now) {
  if (auto err = validate_config(config)) throw GameSetupError("invalid config: " + *err);
  const auto report = validate_map(map, config.card_count);
  if (!report.ok) throw GameSetupError("invalid map: " + report.failures.front());

  GameState s;
  s.map = map;
  s.config = config;
  s.leader_pose = Pose{map.leader_spawn, Heading(0)};
  s.follower_pose = Pose{map.follower_spawn, Heading(0)};
  s.cards = map.initial_cards;
  std::sort(s.cards.begin(), s.cards.end(),
            [](const Card& a, const Card& b) { return a.id < b.id; });
  for (const auto& c : s.cards) s.next_card_id = std::max(s.next_card_id, c.id + 1);
  s.turn.active_role = Role::Leader;
  s.turn.turns_remaining = config.initial_turns;
  s.turn.steps_remaining = config.leader_steps_per_turn;
  s.turn.turn_deadline = now + s.turn_millis(Role::Leader);
  s.rng = DeterministicRng(seed);
  s.over = config.initial_turns == 0;
  return s;
}

std::optional<RejectReason> check_action(const GameState& s, Role actor, const Action& action) {
  if (s.over) return RejectReason::GameOver;
  switch (action.kind) {
    case ActionKind::Noop:
      return std::nullopt;
    case ActionKind::CancelInstructions:
      if (actor != Role::Leader) return RejectReason::WrongActor;
      if (!has_pending_instructions(s)) return RejectReason::NoActiveInstruction;
      return std::nullopt;
    default:
      break;
  }
  if (actor != s.turn.active_role) return RejectReason::WrongActor;
  switch (action.kind) {
    case ActionKind::Forward:
    case ActionKind::Backward:
    case ActionKind::TurnLeft:
    case ActionKind::TurnRight: {
      const Pose target = *movement_target(s, actor, action.kind);
      const Pose& cur = s.pose_of(actor);
      if (target.cell == cur.cell) return std::nullopt;
      if (!s.map.in_bounds(target.cell) || !s.map.can_step(cur.cell, target.cell)) {
        return RejectReason::IllegalMove;
      }
      if (target.cell == s.pose_of(other(actor)).cell) return RejectReason::IllegalMove;
      return std::nullopt;
    }
    case ActionKind::EndTurn:
      return std::nullopt;
    case ActionKind::SendInstruction:
      if (actor != Role::Leader) return RejectReason::WrongActor;
      if (is_blank(action.text)) return RejectReason::EmptyInstructionText;
      if (action.text.size() > kMaxInstructionLength) return RejectReason::InstructionTooLong;
      return std::nullopt;
    case ActionKind::MarkInstructionDone:
      if (actor != Role::Follower) return RejectReason::WrongActor;
      if (s.active_instruction() == nullptr) return RejectReason::NoActiveInstruction;
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

ActionResult apply_action(const GameState& state, Role actor, const Action& action,
                          Timestamp now) {
  if (state.over) return {state, {}, RejectReason::GameOver};

  EventSink sink(state, now);
  if (now >= state.turn.turn_deadline) sink.append(expire_turn(state, now));

  if (auto reason = check_action(sink.state(), actor, action)) {
    auto t = std::move(sink).finish();
    return {std::move(t.state), std::move(t.events), reason};
  }

  const Actor who = actor_of(actor);
  switch (action.kind) {
    case ActionKind::Noop:
      break;
    case ActionKind::CancelInstructions: {
      event::InstructionCancelled c;
      for (const auto& ins : sink.state().instructions) {
        if (ins.status == InstructionStatus::Active || ins.status == InstructionStatus::Queued) {
          c.ids.push_back(ins.id);
        }
      }
      sink.emit(who, std::move(c));
      break;
    }
    case ActionKind::Forward:
    case ActionKind::Backward:
    case ActionKind::TurnLeft:
    case ActionKind::TurnRight: {
      const GameState& s = sink.state();
      event::Move m;
      m.role = actor;
      m.action = action.kind;
      m.from = s.pose_of(actor);
      m.to = *movement_target(s, actor, action.kind);
      m.steps_remaining = s.turn.steps_remaining - 1;
      const bool entered = m.to.cell != m.from.cell;
      sink.emit(who, m);
      if (entered) {
        if (const Card* card = sink.state().card_at(m.to.cell)) {
          sink.emit(who, event::CardToggle{card->id, !card->selected});
          run_resolution(sink, who);
        }
      }
      if (!sink.state().over && sink.state().turn.steps_remaining <= 0) {
        run_turn_advance(sink, TurnReason::StepsExhausted);
      }
      break;
    }
    case ActionKind::EndTurn:
      run_turn_advance(sink, TurnReason::EndTurnAction);
      break;
    case ActionKind::SendInstruction: {
      const GameState& s = sink.state();
      const bool activate = s.active_instruction() == nullptr;
      const int id = s.next_instruction_id;
      sink.emit(who, event::InstructionSent{id, action.text, s.turn.turn_number});
      if (activate) sink.emit(Actor::Server, event::InstructionActivated{id});
      break;
    }
    case ActionKind::MarkInstructionDone: {
      const int id = sink.state().active_instruction()->id;
      sink.emit(who, event::InstructionDone{id});
      for (const auto& ins : sink.state().instructions) {
        if (ins.status == InstructionStatus::Queued) {
          sink.emit(Actor::Server, event::InstructionActivated{ins.id});
          break;
        }
      }
      break;
    }
  }
  auto t = std::move(sink).finish();
  return {std::move(t.state), std::move(t.events), std::nullopt};
}

Transition resolve_sets(const GameState& state, Timestamp now) {
  EventSink sink(state, now);
  run_resolution(sink, Actor::Server);
  return std::move(sink).finish();
}

Transition advance_turn(const GameState& state, TurnReason reason, Timestamp now) {
  EventSink sink(state, now);
  if (!state.over) run_turn_advance(sink, reason);
  return std::move(sink).finish();
}

Transition expire_turn(const GameState& state, Timestamp now) {
  EventSink sink(state, now);
  if (!state.over) {
    sink.emit(Actor::Server, event::TimerExpired{state.turn.turn_number});
    run_turn_advance(sink, TurnReason::TimerExpired);
  }
  return std::move(sink).finish();
}

Transition abandon(const GameState& state, Role role, Timestamp now) {
  EventSink sink(state, now);
  if (!state.over) sink.emit(Actor::Server, event::Abandoned{role});
  return std::move(sink).finish();
}

std::vector<ActionKind> legal_actions(const GameState& state, Role role) {
  std::vector<ActionKind> out;
  for (ActionKind k : kAllActionKinds) {
    Action probe{k, k == ActionKind::SendInstruction ? "x" : ""};
    if (!check_action(state, role, probe)) out.push_back(k);
  }
  return out;
}

Observation observe(const GameState& s, Role role) {
  Observation o;
  o.role = role;
  o.rows = s.map.rows();
  o.cols = s.map.cols();
  o.own_pose = s.pose_of(role);
  o.turn = s.turn;
  o.game_over = s.over;
  o.abandoned = s.abandoned;
  o.rules = PublicRules{s.config.leader_steps_per_turn, s.config.follower_steps_per_turn,
                        s.config.fog_range, s.config.fov_degrees, s.config.hide_card_patterns};

  std::vector<CardFace> selected;
  for (const auto& c : s.cards) {
    if (c.selected) selected.push_back(c.face);
  }
  const bool invalid = !selected.empty() && !is_compatible_selection(selected);

  if (role == Role::Leader) {
    for (const HexCoord c : s.map.cells()) o.tiles.push_back({c, s.map.tile(c)});
    o.props = s.map.props();
    for (const auto& c : s.cards) o.cards.push_back({c.id, c.cell, c.selected, c.face});
    o.other_pose = s.follower_pose;
    o.instructions = s.instructions;
    o.selection_invalid = invalid;
    return o;
  }

  const auto visible =
      visible_set(s.map, s.follower_pose, s.config.fov_degrees, s.config.fog_range);
  for (const HexCoord c : s.map.cells()) {
    if (!visible.contains(c)) continue;
    o.tiles.push_back({c, s.map.tile(c)});
    if (const auto& p = s.map.prop_at(c)) o.props.push_back(*p);
  }
  for (const auto& c : s.cards) {
    if (!visible.contains(c.cell)) continue;
    CardView v{c.id, c.cell, c.selected, c.face};
    if (s.config.hide_card_patterns && !c.selected) v.face.reset();
    o.cards.push_back(v);
  }
  if (visible.contains(s.leader_pose.cell)) o.other_pose = s.leader_pose;
  for (const auto& ins : s.instructions) {
    if (ins.status != InstructionStatus::Queued) o.instructions.push_back(ins);
  }
  if (!s.config.hide_card_patterns) o.selection_invalid = invalid;
  return o;
}

namespace {

Instruction& find_instruction(GameState& s, int id) {
  for (auto& ins : s.instructions) {
    if (ins.id == id) return ins;
  }
  throw EventApplyError("unknown instruction id " + std::to_string(id));
}

struct EventApplier {
  GameState& s;

  void operator()(const event::GameStart& e) {
    s = e.initial_state ? *e.initial_state : new_game(e.map, e.config, e.seed, e.start_time);
  }
  void operator()(const event::Move& e) {
    Pose& p = s.pose_of(e.role);
    if (p != e.from) throw EventApplyError("move does not start at the current pose");
    if (s.turn.active_role != e.role) throw EventApplyError("move by inactive role");
    p = e.to;
    s.turn.steps_remaining = e.steps_remaining;
  }
  void operator()(const event::CardToggle& e) {
    for (auto& c : s.cards) {
      if (c.id == e.card_id) {
        c.selected = e.selected;
        return;
      }
    }
    throw EventApplyError("toggle of unknown card " + std::to_string(e.card_id));
  }
  void operator()(const event::SetCompleted& e) {
    for (int id : e.removed) {
      auto it = std::find_if(s.cards.begin(), s.cards.end(),
                             [id](const Card& c) { return c.id == id; });
      if (it == s.cards.end()) throw EventApplyError("set removes unknown card");
      s.cards.erase(it);
    }
    for (const auto& c : e.spawned) {
      s.cards.push_back(c);
      s.next_card_id = std::max(s.next_card_id, c.id + 1);
    }
    std::sort(s.cards.begin(), s.cards.end(),
              [](const Card& a, const Card& b) { return a.id < b.id; });
    s.turn.score = e.score;
    s.turn.sets_collected += 1;
    s.turn.turns_remaining += e.bonus_turns;
    s.rng = DeterministicRng(s.rng.seed(), e.rng_counter);
  }
  void operator()(const event::InstructionSent& e) {
    s.instructions.push_back({e.id, e.text, InstructionStatus::Queued, e.issued_turn});
    s.next_instruction_id = std::max(s.next_instruction_id, e.id + 1);
  }
  void operator()(const event::InstructionActivated& e) {
    find_instruction(s, e.id).status = InstructionStatus::Active;
  }
  void operator()(const event::InstructionDone& e) {
    find_instruction(s, e.id).status = InstructionStatus::Done;
  }
  void operator()(const event::InstructionCancelled& e) {
    for (int id : e.ids) find_instruction(s, id).status = InstructionStatus::Cancelled;
  }
  void operator()(const event::TimerExpired&) {}
  void operator()(const event::TurnTransition& e) {
    if (s.turn.active_role != e.from_role) throw EventApplyError("turn transition out of order");
    s.turn.active_role = e.to_role;
    s.turn.turns_remaining = e.turns_remaining;
    s.turn.steps_remaining = e.steps_remaining;
    s.turn.turn_deadline = e.deadline;
    s.turn.turn_number = e.turn_number;
  }
  void operator()(const event::Abandoned&) {
    s.over = true;
    s.abandoned = true;
  }
  void operator()(const event::GameOver& e) {
    s.over = true;
    s.turn.score = e.score;
  }
  void operator()(const event::ScenarioEdit& e) { apply_edit(s, e.edit); }
};

}  // namespace

GameState apply_event(GameState state, const GameEvent& event) {
  if (state.over && !event.is<event::GameStart>()) {
    throw EventApplyError("event after the game ended");
  }
  std::visit(EventApplier{state}, event.body);
  return state;
}

GameEvent start_event(const GameState& initial, std::uint64_t seed, Timestamp now, bool embed_state) {
  event::GameStart body{initial.map, initial.config, seed, now, nullptr};
  if (embed_state) body.initial_state = std::make_shared<const GameState>(initial);
  return GameEvent{0, 0, now, Actor::Server, std::move(body)};
}

void apply_edit(GameState& s, const StateEdit& edit) {
  if (edit.tiles) {
    for (const auto& t : *edit.tiles) s.map.set_tile(t.cell, t.tile);
  }
  if (edit.props) {
    s.map.clear_props();
    for (const auto& p : *edit.props) s.map.set_prop(p);
  }
  if (edit.cards) {
    s.cards = *edit.cards;
    std::sort(s.cards.begin(), s.cards.end(),
              [](const Card& a, const Card& b) { return a.id < b.id; });
    for (const auto& c : s.cards) s.next_card_id = std::max(s.next_card_id, c.id + 1);
  }
  if (edit.leader_pose) s.leader_pose = *edit.leader_pose;
  if (edit.follower_pose) s.follower_pose = *edit.follower_pose;
}

std::optional<std::string> check_state_invariants(const GameState& s) {
  if (auto err = validate_config(s.config)) return "config: " + *err;
  for (Role r : {Role::Leader, Role::Follower}) {
    const char* who = r == Role::Leader ? "leader_pose" : "follower_pose";
    const Pose& p = s.pose_of(r);
    if (!s.map.in_bounds(p.cell)) return std::string(who) + ": out of bounds";
    if (!s.map.traversable(p.cell)) return std::string(who) + ": not traversable";
  }
  if (s.leader_pose.cell == s.follower_pose.cell) return "poses: agents share a cell";
  std::set<HexCoord> card_cells;
  std::set<int> card_ids;
  for (const auto& c : s.cards) {
    if (!s.map.in_bounds(c.cell)) return "cards: card out of bounds";
    if (!s.map.traversable(c.cell)) return "cards: card on an impassable cell";
    if (c.face.count < 1 || c.face.count > kMaxCardCount) return "cards: count out of range";
    if (!card_cells.insert(c.cell).second) return "cards: two cards share a cell";
    if (!card_ids.insert(c.id).second) return "cards: duplicate card id";
  }
  int active = 0;
  for (const auto& ins : s.instructions) {
    if (ins.status == InstructionStatus::Active) ++active;
    if (ins.text.empty() || ins.text.size() > kMaxInstructionLength) {
      return "instructions: text length out of range";
    }
  }
  if (active > 1) return "instructions: more than one active instruction";
  bool seen_queued = false;
  for (const auto& ins : s.instructions) {
    if (ins.status == InstructionStatus::Queued) seen_queued = true;
    if (seen_queued && ins.status == InstructionStatus::Active) {
      return "instructions: active instruction after a queued one";
    }
  }
  if (s.turn.steps_remaining < 0 || s.turn.steps_remaining > s.step_budget(s.turn.active_role)) {
    return "turn: steps_remaining exceeds the role budget";
  }
  if (s.turn.turns_remaining < 0) return "turn: negative turns_remaining";
  if (s.turn.score != s.turn.sets_collected) return "turn: score differs from sets_collected";
  return std::nullopt;
}

}  // namespace cb2
