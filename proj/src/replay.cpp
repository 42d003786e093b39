#include "cb2/replay.hpp"

#include "cb2/gamecore.hpp"

namespace cb2 {

GameState replay(std::span<const GameEvent> events) {
  if (events.empty()) throw ReplayError(0, "empty log");
  GameState state;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const GameEvent& e = events[i];
    const auto expected = static_cast<std::int64_t>(i);
    if (e.seq != expected) throw ReplayError(expected, "expected seq " + std::to_string(expected) + ", got " + std::to_string(e.seq));
    if ((i == 0) != e.is<event::GameStart>()) {
      throw ReplayError(e.seq, i == 0 ? "log must start with GameStart" : "GameStart in the middle of a log");
    }
    if (e.game_id != events[0].game_id) throw ReplayError(e.seq, "event belongs to another game");
    try {
      state = apply_event(std::move(state), e);
    } catch (const std::exception& ex) {
      throw ReplayError(e.seq, ex.what());
    }
  }
  return state;
}

}  // namespace cb2
