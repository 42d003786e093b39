#include <iostream>

#include <CLI11.hpp>

#include "cb2/event_store.hpp"
#include "cb2/replay.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Print the stored event log of one game"};
  cb2::GameId game = 0;
  std::string data_dir = "data";
  bool fold = false;
  app.add_option("--game", game, "game id")->required();
  app.add_option("--data-dir", data_dir, "directory holding games.sqlite");
  app.add_flag("--fold", fold, "also print the folded final state and its hash");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto db = std::filesystem::path(data_dir) / "games.sqlite";
    if (!std::filesystem::exists(db)) throw cb2::StoreError("no store at " + db.string());
    cb2::EventStore store(db.string());
    const auto record = store.record(game);
    if (!record) throw cb2::StoreError("unknown game " + std::to_string(game));
    const auto events = store.events(game);
    for (const auto& e : events) std::cout << cb2::to_canonical(e) << "\n";
    if (fold && !events.empty()) {
      const cb2::GameState s = cb2::replay(events);
      std::cerr << "state_hash " << cb2::state_hash(s) << " stored " << record->final_hash.value_or("-") << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "replay-dump: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
