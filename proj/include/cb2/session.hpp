#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "cb2/game_events.hpp"
#include "cb2/game_state.hpp"

namespace cb2 {

struct StepResult {
  Observation observation;
  TurnState turn;
  bool game_over = false;
  bool abandoned = false;
  int score = 0;
  std::optional<std::string> rejection;  // reject reason name; the state did not advance
};

/// Raised by step() once the game has ended, or when the transport fails.
class SessionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One player's blocking view of a game, shared by local and networked play.
class Session {
 public:
  virtual ~Session() = default;

  virtual Role role() const = 0;
  virtual GameId game_id() const = 0;

  /// Blocks until this role's first decision point or the end of the game.
  virtual StepResult initial() = 0;

  /// Submits `action` and blocks until this role may act again or the game ends.
  /// A rejected action returns at once with `rejection` set.
  virtual StepResult step(const Action& action) = 0;
};

inline StepResult make_step_result(Observation obs) {
  StepResult r;
  r.turn = obs.turn;
  r.game_over = obs.game_over;
  r.abandoned = obs.abandoned;
  r.score = obs.turn.score;
  r.observation = std::move(obs);
  return r;
}

}  // namespace cb2
