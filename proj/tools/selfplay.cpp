#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "cb2/event_store.hpp"
#include "cb2/local_game.hpp"
#include "cb2/serialize.hpp"
#include "cb2/server_config.hpp"

// Plays scripted leader/follower pairs in-process. Game i uses map seed S + i.
int main(int argc, char** argv) {
  CLI::App app{"Run scripted bot games without a server"};
  std::string config_path;
  int games = 1;
  std::uint64_t seed = 0;
  bool record = false;
  std::optional<std::string> data_dir;
  app.add_option("--config", config_path, "INI configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--games", games, "number of games")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "first map seed");
  app.add_flag("--record", record, "store the games in the configured data dir");
  app.add_option("--data-dir", data_dir, "overrides [server] data_dir");
  CLI11_PARSE(app, argc, argv);

  try {
    cb2::ServerConfig config = cb2::load_server_config(config_path);
    if (data_dir) config.data_dir = *data_dir;
    std::unique_ptr<cb2::EventStore> store;
    if (record) {
      std::string path = config.data_dir.string();
      if (path != ":memory:") {
        std::filesystem::create_directories(config.data_dir);
        path = (config.data_dir / "games.sqlite").string();
      }
      store = std::make_unique<cb2::EventStore>(path, cb2::EventStore::Options{config.sync_full});
    }

    std::printf("%6s %20s %6s %8s  %s\n", "game", "seed", "score", "actions", "hash");
    long total = 0;
    for (int i = 0; i < games; ++i) {
      cb2::GenConfig gen = config.mapgen;
      gen.seed = seed + static_cast<std::uint64_t>(i);
      const cb2::GameMap map = cb2::generate_map(gen);
      cb2::SelfPlayResult r = cb2::play_local(map, config.game, map.seed, record);
      cb2::GameId id = i;
      if (store) {
        id = store->create_game("selfplay", {"leader-bot", "follower-bot"});
        for (auto& e : r.events) e.game_id = id;
        store->append(r.events);
        store->set_final_hash(id, r.final_hash);
      }
      std::printf("%6lld %20llu %6d %8d  %s\n", static_cast<long long>(id),
                  static_cast<unsigned long long>(gen.seed), r.score, r.actions, r.final_hash.c_str());
      total += r.score;
    }
    std::printf("mean score %.3f over %d games\n", static_cast<double>(total) / games, games);
  } catch (const std::exception& e) {
    std::cerr << "selfplay: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
