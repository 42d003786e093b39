#include "cb2/server_config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace cb2 {

namespace pt = boost::property_tree;

namespace {

template <class T>
void read(const pt::ptree& section, const std::string& where, const char* key, T& out) {
  const auto child = section.get_child_optional(pt::ptree::path_type(key, '\0'));
  if (!child) return;
  const auto v = child->get_value_optional<T>();
  if (!v) throw ConfigError(where + "." + key + ": cannot parse '" + child->data() + "'");
  out = *v;
}

void read_bool(const pt::ptree& section, const std::string& where, const char* key, bool& out) {
  std::string text;
  read(section, where, key, text);
  if (text.empty()) return;
  if (text == "true" || text == "1" || text == "yes") {
    out = true;
  } else if (text == "false" || text == "0" || text == "no") {
    out = false;
  } else {
    throw ConfigError(where + "." + key + ": expected a boolean, got '" + text + "'");
  }
}

std::vector<int> int_list(const std::string& where, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(where + ": bad list entry '" + item + "'");
    }
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty() || p == ":memory:") return p;
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

void read_game(const pt::ptree& s, GameConfig& g) {
  const std::string w = "game";
  read(s, w, "leader_steps_per_turn", g.leader_steps_per_turn);
  read(s, w, "follower_steps_per_turn", g.follower_steps_per_turn);
  read(s, w, "leader_turn_seconds", g.leader_turn_seconds);
  read(s, w, "follower_turn_seconds", g.follower_turn_seconds);
  read(s, w, "initial_turns", g.initial_turns);
  std::string schedule;
  read(s, w, "turn_bonus_schedule", schedule);
  if (!schedule.empty()) g.turn_bonus_schedule = int_list("game.turn_bonus_schedule", schedule);
  read(s, w, "card_count", g.card_count);
  read(s, w, "fog_range", g.fog_range);
  read(s, w, "fov_degrees", g.fov_degrees);
  read_bool(s, w, "hide_card_patterns", g.hide_card_patterns);
  read(s, w, "num_colors", g.num_colors);
  read(s, w, "num_shapes", g.num_shapes);
}

void read_mapgen(const pt::ptree& s, GenConfig& g) {
  const std::string w = "mapgen";
  read(s, w, "rows", g.rows);
  read(s, w, "cols", g.cols);
  read(s, w, "town_count", g.town_count);
  read(s, w, "town_size_min", g.town_size_min);
  read(s, w, "town_size_max", g.town_size_max);
  read(s, w, "town_radius", g.town_radius);
  read(s, w, "lake_count", g.lake_count);
  read(s, w, "lake_size_min", g.lake_size_min);
  read(s, w, "lake_size_max", g.lake_size_max);
  read(s, w, "mountain_count", g.mountain_count);
  read(s, w, "mountain_size_min", g.mountain_size_min);
  read(s, w, "mountain_size_max", g.mountain_size_max);
  read(s, w, "ramps_per_mountain", g.ramps_per_mountain);
  read(s, w, "tree_density", g.tree_density);
  read(s, w, "rock_density", g.rock_density);
  read(s, w, "streetlight_density", g.streetlight_density);
}

}  // namespace

ServerConfig parse_server_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }

  ServerConfig c;
  for (const auto& [name, section] : tree) {
    if (!section.data().empty()) throw ConfigError("key '" + name + "' outside of a section");
    if (name == "server") {
      read(section, name, "host", c.host);
      read(section, name, "port", c.port);
      std::string dir;
      read(section, name, "data_dir", dir);
      if (!dir.empty()) c.data_dir = resolve(base_dir, dir);
      std::string sync;
      read(section, name, "sync", sync);
      if (!sync.empty() && sync != "full" && sync != "normal") throw ConfigError("server.sync: expected full or normal");
      if (!sync.empty()) c.sync_full = sync == "full";
      std::string assets;
      read(section, name, "static_dir", assets);
      if (!assets.empty()) c.static_dir = resolve(base_dir, assets);
      read(section, name, "threads", c.threads);
      read(section, name, "ping_interval_ms", c.ping_interval_ms);
      read(section, name, "max_missed_pongs", c.max_missed_pongs);
      read(section, name, "map_pool_size", c.map_pool_size);
      read(section, name, "map_seed", c.map_seed);
    } else if (name == "game") {
      read_game(section, c.game);
    } else if (name == "mapgen") {
      read_mapgen(section, c.mapgen);
    } else if (name == "tutorial") {
      std::map<int, std::string> prompts;
      for (const auto& [key, value] : section) {
        try {
          prompts[std::stoi(key)] = value.data();
        } catch (const std::exception&) {
          throw ConfigError("tutorial." + key + ": prompt keys must be numbers");
        }
      }
      for (auto& [_, p] : prompts) c.tutorial_prompts.push_back(std::move(p));
    } else if (name.rfind("lobby:", 0) == 0) {
      LobbyDef def;
      def.id = name.substr(6);
      if (def.id.empty()) throw ConfigError("lobby section without an id");
      std::string policy = "human_human";
      std::string room = "game";
      std::string scenario;
      read(section, name, "policy", policy);
      read(section, name, "room_type", room);
      read(section, name, "scenario", scenario);
      try {
        def.policy = parse_pairing_policy(policy);
        def.room_type = parse_room_type(room);
      } catch (const std::exception& e) {
        throw ConfigError(name + ": " + e.what());
      }
      if (def.room_type == RoomType::Replay) {
        throw ConfigError(name + ": replays are viewed in the browser client, not in lobby rooms");
      }
      if (def.room_type == RoomType::Scenario && scenario.empty()) throw ConfigError(name + ": scenario file missing");
      if (!scenario.empty()) def.scenario = resolve(base_dir, scenario);
      c.lobbies.push_back(std::move(def));
    } else {
      throw ConfigError("unknown section [" + name + "]");
    }
  }
  c.mapgen.card_count = c.game.card_count;
  if (auto err = validate_config(c.game)) throw ConfigError("game: " + *err);
  if (c.port < 0 || c.port > 65535) throw ConfigError("server.port out of range");
  if (c.threads < 1) throw ConfigError("server.threads must be positive");
  if (c.ping_interval_ms < 1 || c.max_missed_pongs < 1) throw ConfigError("server: heartbeat settings must be positive");
  if (c.lobbies.empty()) c.lobbies.push_back(LobbyDef{"main", PairingPolicy::HumanHuman, RoomType::Game, {}});
  return c;
}

ServerConfig load_server_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_server_config(ss.str(), path.parent_path());
}

}  // namespace cb2
