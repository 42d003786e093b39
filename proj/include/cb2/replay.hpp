#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "cb2/game_events.hpp"
#include "cb2/game_state.hpp"

namespace cb2 {

/// A log that cannot be folded; `seq` is the first offending event.
class ReplayError : public std::runtime_error {
 public:
  ReplayError(std::int64_t seq, const std::string& what)
      : std::runtime_error("event " + std::to_string(seq) + ": " + what), seq_(seq) {}
  std::int64_t seq() const { return seq_; }

 private:
  std::int64_t seq_;
};

/// Left fold of a log prefix that starts with GameStart and has dense seqs.
GameState replay(std::span<const GameEvent> events);

}  // namespace cb2
