#include "cb2/local_game.hpp"

#include <thread>

#include "cb2/serialize.hpp"

namespace cb2 {

LocalGame::LocalGame(const GameMap& map, const GameConfig& config, std::uint64_t seed, LocalOptions opts)
    : opts_(std::move(opts)) {
  const Timestamp now = opts_.clock();
  state_ = new_game(map, config, seed, now);
  numbering_.game_id = opts_.game_id;
  if (opts_.capture) {
    log_.push_back(start_event(state_, seed, now));
    numbering_.stamp(log_.back());
  }
}

ActionResult LocalGame::apply(Role role, const Action& action) {
  ActionResult r;
  {
    std::lock_guard lock(mu_);
    r = apply_action(state_, role, action, opts_.clock());
    numbering_.stamp(r.events);
    if (opts_.capture) log_.insert(log_.end(), r.events.begin(), r.events.end());
    state_ = r.state;
  }
  cv_.notify_all();
  return r;
}

GameState LocalGame::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

Observation LocalGame::observe(Role role) const {
  std::lock_guard lock(mu_);
  return cb2::observe(state_, role);
}

std::vector<GameEvent> LocalGame::events() const {
  std::lock_guard lock(mu_);
  return log_;
}

Observation LocalGame::wait_for(Role role) const {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return state_.over || state_.turn.active_role == role; });
  return cb2::observe(state_, role);
}

namespace {

class LocalSession final : public Session {
 public:
  LocalSession(LocalGame& game, Role role) : game_(game), role_(role) {}

  Role role() const override { return role_; }
  GameId game_id() const override { return 0; }

  StepResult initial() override { return finish(game_.wait_for(role_)); }

  StepResult step(const Action& action) override {
    if (ended_) throw SessionError("step after game over");
    const ActionResult r = game_.apply(role_, action);
    if (!r.accepted()) {
      StepResult out = make_step_result(game_.observe(role_));
      out.rejection = std::string(reject_reason_name(*r.rejection));
      ended_ = out.game_over;
      return out;
    }
    return finish(game_.wait_for(role_));
  }

 private:
  StepResult finish(Observation obs) {
    ended_ = obs.game_over;
    return make_step_result(std::move(obs));
  }

  LocalGame& game_;
  Role role_;
  bool ended_ = false;
};

}  // namespace

std::unique_ptr<Session> LocalGame::session(Role role) { return std::make_unique<LocalSession>(*this, role); }

AgentEnv::AgentEnv(GameMap map, GameConfig config, std::uint64_t seed, Role controlled, Policy partner)
    : map_(std::move(map)), config_(std::move(config)), seed_(seed), role_(controlled), partner_(std::move(partner)) {
  reset();
}

void AgentEnv::run_partner() {
  const Role partner = other(role_);
  for (int guard = 0; guard < 100000 && !state_.over && state_.turn.active_role == partner; ++guard) {
    auto r = apply_action(state_, partner, partner_(cb2::observe(state_, partner)), 0);
    if (!r.accepted()) throw SessionError("partner policy submitted a rejected action");
    state_ = std::move(r.state);
  }
}

Observation AgentEnv::reset() {
  state_ = new_game(map_, config_, seed_, 0);
  run_partner();
  return cb2::observe(state_, role_);
}

AgentEnv::Outcome AgentEnv::step(const Action& action) {
  Outcome out;
  const int before = state_.turn.score;
  auto r = apply_action(state_, role_, action, 0);
  if (r.accepted()) {
    state_ = std::move(r.state);
    run_partner();
  } else {
    out.rejection = std::string(reject_reason_name(*r.rejection));
  }
  out.observation = cb2::observe(state_, role_);
  out.reward = static_cast<double>(state_.turn.score - before);
  out.done = state_.over;
  return out;
}

SelfPlayResult play_local(const GameMap& map, const GameConfig& config, std::uint64_t seed, bool capture,
                          int max_actions) {
  LocalOptions opts;
  opts.capture = capture;
  LocalGame game(map, config, seed, opts);
  LeaderBot leader;
  FollowerBot follower;
  SelfPlayResult out;
  GameState s = game.state();
  while (!s.over && out.actions < max_actions) {
    const Role active = s.turn.active_role;
    const Observation obs = cb2::observe(s, active);
    const Action a = active == Role::Leader ? leader.act(obs) : follower.act(obs);
    const auto r = game.apply(active, a);
    if (!r.accepted()) {
      throw SessionError("bot action rejected: " + std::string(reject_reason_name(*r.rejection)));
    }
    ++out.actions;
    s = r.state;
  }
  out.score = s.turn.score;
  out.abandoned = s.abandoned;
  out.final_hash = state_hash(s);
  out.events = game.events();
  return out;
}

std::pair<StepResult, StepResult> play_bots(Session& leader, Session& follower, int max_actions) {
  const auto run = [max_actions](Session& session, StepResult& last, std::exception_ptr& error) {
    try {
      LeaderBot lb;
      FollowerBot fb;
      last = session.initial();
      for (int i = 0; i < max_actions && !last.game_over; ++i) {
        const Action a = session.role() == Role::Leader ? lb.act(last.observation) : fb.act(last.observation);
        last = session.step(a);
        if (last.rejection) throw SessionError("bot action rejected: " + *last.rejection);
      }
    } catch (...) {
      error = std::current_exception();
    }
  };
  StepResult l;
  StepResult f;
  std::exception_ptr le;
  std::exception_ptr fe;
  {
    std::jthread t([&] { run(follower, f, fe); });
    run(leader, l, le);
  }
  if (le) std::rethrow_exception(le);
  if (fe) std::rethrow_exception(fe);
  return {l, f};
}

}  // namespace cb2
