#include "cb2/room.hpp"

#include "cb2/scenario.hpp"

namespace cb2 {

namespace {

bool touches_turn(const std::vector<GameEvent>& events) {
  for (const auto& e : events) {
    if (e.is<event::TurnTransition>()) return true;
  }
  return false;
}

bool touches_instructions(const std::vector<GameEvent>& events) {
  for (const auto& e : events) {
    if (e.is<event::InstructionSent>() || e.is<event::InstructionActivated>() || e.is<event::InstructionDone>() ||
        e.is<event::InstructionCancelled>()) {
      return true;
    }
  }
  return false;
}

}  // namespace

RoomCore::RoomCore(RoomSetup setup) : setup_(std::move(setup)), state_(setup_.initial) {
  numbering_.game_id = setup_.game_id;
}

void RoomCore::commit(std::vector<GameEvent> events, std::vector<Outbound>& out) {
  if (events.empty()) return;
  numbering_.stamp(events);
  if (setup_.store) setup_.store->append(events);
  for (const auto& e : events) {
    log_.push_back(e);
    if (editor_) out.push_back({Endpoint::Editor, msg::ScenarioEventFeed{e}});
  }
}

void RoomCore::sync(std::vector<Outbound>& out, std::optional<Role> replying, std::int64_t msg_seq,
                    const std::vector<GameEvent>& events) {
  for (Role r : {Role::Leader, Role::Follower}) {
    Observation obs = observe(state_, r);
    if (touches_turn(events)) out.push_back({endpoint_of(r), msg::TurnUpdate{obs.turn}});
    if (touches_instructions(events)) out.push_back({endpoint_of(r), msg::InstructionUpdate{obs.instructions}});
    const std::int64_t reply = replying == r ? msg_seq : 0;
    out.push_back({endpoint_of(r), msg::StateSync{std::move(obs), reply}});
  }
  if (state_.over && !finished_) {
    finished_ = true;
    if (setup_.store) setup_.store->set_final_hash(setup_.game_id, state_hash(state_));
    for (Endpoint e : {Endpoint::Leader, Endpoint::Follower}) {
      out.push_back({e, msg::GameOver{state_.turn.score, state_.abandoned}});
    }
    if (editor_) out.push_back({Endpoint::Editor, msg::GameOver{state_.turn.score, state_.abandoned}});
  }
}

std::vector<Outbound> RoomCore::start() {
  std::vector<Outbound> out;
  if (started_) return out;
  started_ = true;
  const Timestamp now = setup_.clock();
  const bool scenario = setup_.type == RoomType::Scenario;
  if (scenario) {
    state_.turn.turn_deadline = now + state_.turn_millis(state_.turn.active_role);
  } else {
    state_ = new_game(state_.map, state_.config, setup_.seed, now);
  }
  std::vector<GameEvent> events{start_event(state_, setup_.seed, now, scenario)};
  commit(events, out);
  if (setup_.type == RoomType::Tutorial && !setup_.tutorial_prompts.empty()) {
    out.push_back({endpoint_of(setup_.tutorial_role), msg::TutorialPrompt{0, setup_.tutorial_prompts[0]}});
    next_prompt_ = 1;
  }
  sync(out, std::nullopt, 0, {});
  return out;
}

std::vector<Outbound> RoomCore::on_action(Role from, std::int64_t msg_seq, const Action& action) {
  std::vector<Outbound> out;
  ActionResult r = apply_action(state_, from, action, setup_.clock());
  if (!r.events.empty() || r.accepted()) {
    state_ = std::move(r.state);
    commit(r.events, out);
  }
  if (!r.accepted()) {
    if (!r.events.empty()) sync(out, std::nullopt, 0, r.events);
    out.push_back({endpoint_of(from), msg::Rejected{std::string(reject_reason_name(*r.rejection)), msg_seq}});
    return out;
  }
  if (setup_.type == RoomType::Tutorial && from == setup_.tutorial_role && action.kind != ActionKind::Noop &&
      next_prompt_ < setup_.tutorial_prompts.size() && !state_.over) {
    out.push_back({endpoint_of(from), msg::TutorialPrompt{static_cast<int>(next_prompt_),
                                                          setup_.tutorial_prompts[next_prompt_]}});
    ++next_prompt_;
  }
  sync(out, from, msg_seq, r.events);
  return out;
}

std::vector<Outbound> RoomCore::on_timer(int turn_number) {
  std::vector<Outbound> out;
  if (state_.over || state_.turn.turn_number != turn_number) return out;
  const Timestamp now = setup_.clock();
  if (now < state_.turn.turn_deadline) return out;
  Transition t = expire_turn(state_, now);
  state_ = std::move(t.state);
  commit(t.events, out);
  sync(out, std::nullopt, 0, t.events);
  return out;
}

std::vector<Outbound> RoomCore::on_leave(Role who) {
  std::vector<Outbound> out;
  if (state_.over) return out;
  Transition t = abandon(state_, who, setup_.clock());
  state_ = std::move(t.state);
  commit(t.events, out);
  sync(out, std::nullopt, 0, t.events);
  return out;
}

std::vector<Outbound> RoomCore::on_attach(std::int64_t msg_seq) {
  std::vector<Outbound> out;
  if (setup_.type != RoomType::Scenario) {
    out.push_back({Endpoint::Editor, msg::ScenarioAck{false, "not-a-scenario-room", msg_seq}});
    return out;
  }
  if (editor_) {
    out.push_back({Endpoint::Editor, msg::ScenarioAck{false, "editor-already-attached", msg_seq}});
    return out;
  }
  editor_ = true;
  out.push_back({Endpoint::Editor, msg::ScenarioAck{true, "", msg_seq}});
  for (const auto& e : log_) out.push_back({Endpoint::Editor, msg::ScenarioEventFeed{e}});
  return out;
}

std::vector<Outbound> RoomCore::on_push(std::int64_t msg_seq, const StateEdit& edit) {
  std::vector<Outbound> out;
  if (!editor_) {
    out.push_back({Endpoint::Editor, msg::ScenarioAck{false, "not-attached", msg_seq}});
    return out;
  }
  if (auto err = validate_edit(state_, edit)) {
    out.push_back({Endpoint::Editor, msg::ScenarioAck{false, *err, msg_seq}});
    return out;
  }
  GameEvent e;
  e.wall_time = setup_.clock();
  e.actor = Actor::Server;
  e.body = event::ScenarioEdit{edit};
  state_ = apply_event(std::move(state_), e);
  std::vector<GameEvent> events{e};
  commit(events, out);
  out.push_back({Endpoint::Editor, msg::ScenarioAck{true, "", msg_seq}});
  sync(out, std::nullopt, 0, events);
  return out;
}

}  // namespace cb2
