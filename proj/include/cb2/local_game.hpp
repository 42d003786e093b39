#pragma once

#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>

#include "cb2/agents.hpp"
#include "cb2/gamecore.hpp"
#include "cb2/session.hpp"

namespace cb2 {

struct LocalOptions {
  Clock clock = [] { return Timestamp{0}; };  // frozen: turns never time out
  bool capture = false;
  GameId game_id = 0;
};

/// In-process engine with no networking. Thread-safe.
class LocalGame {
 public:
  LocalGame(const GameMap& map, const GameConfig& config, std::uint64_t seed, LocalOptions opts = {});

  /// Non-blocking; any role may submit at any time.
  ActionResult apply(Role role, const Action& action);

  GameState state() const;
  Observation observe(Role role) const;
  /// Captured log starting with GameStart; empty unless capture is on.
  std::vector<GameEvent> events() const;

  /// Blocking session for one role. The game must outlive it.
  std::unique_ptr<Session> session(Role role);

  /// Blocks until `role` may act or the game is over.
  Observation wait_for(Role role) const;

 private:
  LocalOptions opts_;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  GameState state_;
  EventNumbering numbering_;
  std::vector<GameEvent> log_;
};

using Policy = std::function<Action(const Observation&)>;

/// Single-agent wrapper: the caller controls one role, `partner` plays the other
/// in-process. Reward is the score delta of each step.
class AgentEnv {
 public:
  struct Outcome {
    Observation observation;
    double reward = 0.0;
    bool done = false;
    std::optional<std::string> rejection;
  };

  AgentEnv(GameMap map, GameConfig config, std::uint64_t seed, Role controlled, Policy partner);

  Observation reset();
  Outcome step(const Action& action);
  const GameState& state() const { return state_; }

 private:
  void run_partner();

  GameMap map_;
  GameConfig config_;
  std::uint64_t seed_;
  Role role_;
  Policy partner_;
  GameState state_;
};

struct SelfPlayResult {
  int score = 0;
  int actions = 0;
  bool abandoned = false;
  std::string final_hash;
  std::vector<GameEvent> events;
};

/// Scripted leader and follower bots on one thread. Throws if a bot submits
/// an action the engine rejects.
SelfPlayResult play_local(const GameMap& map, const GameConfig& config, std::uint64_t seed,
                          bool capture = true, int max_actions = 100000);

/// Runs the scripted bots on two sessions, one thread each, until the game ends.
/// Returns the final results as seen by the leader and the follower.
std::pair<StepResult, StepResult> play_bots(Session& leader, Session& follower, int max_actions = 100000);

}  // namespace cb2
