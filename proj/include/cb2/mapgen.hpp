#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cb2/game_map.hpp"

namespace cb2 {

/// Parameters of procedural map generation.
struct GenConfig {
  int rows = 25;
  int cols = 25;
  int town_count = 3;
  int town_size_min = 4;  // houses per town
  int town_size_max = 8;
  int town_radius = 4;    // max distance between two houses of one town
  int lake_count = 3;
  int lake_size_min = 5;
  int lake_size_max = 14;
  int mountain_count = 2;
  int mountain_size_min = 6;
  int mountain_size_max = 12;
  int ramps_per_mountain = 2;
  double tree_density = 0.04;
  double rock_density = 0.015;
  double streetlight_density = 0.08;  // fraction of path cells flanked by a light
  int card_count = 21;
  std::uint64_t seed = 0;

  friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

/// Thrown for configurations that cannot produce a valid map.
class InfeasibleConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Intermediate placements, reported for inspection.
struct GenerationTrace {
  std::vector<HexCoord> town_centers;
  std::vector<HexCoord> ramps;
};

/// Deterministic in `config` (including its seed).
GameMap generate_map(const GenConfig& config, GenerationTrace* trace = nullptr);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Checks spawn/card reachability, cell exclusivity, ramp adjacency and,
/// when given, the expected card count. Never throws.
ValidationReport validate_map(const GameMap& map,
                              std::optional<int> expected_card_count = std::nullopt);

}  // namespace cb2
