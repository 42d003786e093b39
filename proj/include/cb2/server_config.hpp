#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cb2/game_config.hpp"
#include "cb2/lobby.hpp"
#include "cb2/mapgen.hpp"

namespace cb2 {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LobbyDef {
  std::string id;
  PairingPolicy policy = PairingPolicy::HumanHuman;
  RoomType room_type = RoomType::Game;
  std::optional<std::filesystem::path> scenario;  // scenario rooms only
};

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;                               // 0 picks a free port
  std::filesystem::path data_dir = "data";       // ":memory:" keeps nothing on disk
  bool sync_full = true;
  std::filesystem::path static_dir;              // browser client assets served at /play
  int threads = 4;
  int ping_interval_ms = 10000;
  int max_missed_pongs = 3;
  int map_pool_size = 4;
  std::uint64_t map_seed = 0;
  GameConfig game;
  GenConfig mapgen;
  std::vector<LobbyDef> lobbies;
  std::vector<std::string> tutorial_prompts;
};

/// INI text; see README for the keys. Relative paths resolve against `base_dir`.
ServerConfig parse_server_config(const std::string& text, const std::filesystem::path& base_dir = {});
ServerConfig load_server_config(const std::filesystem::path& path);

}  // namespace cb2
