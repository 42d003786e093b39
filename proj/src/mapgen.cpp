#include "cb2/mapgen.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>

#include "cb2/rng.hpp"

namespace cb2 {

namespace {

constexpr int kMaxRegenerations = 64;
constexpr int kMaxRepairs = 8;

std::string cell_str(HexCoord c) {
  return "(" + std::to_string(c.q) + "," + std::to_string(c.r) + ")";
}

bool is_ground(Terrain t) { return t == Terrain::Grass || t == Terrain::Path; }

template <class T>
void shuffle(std::vector<T>& v, DeterministicRng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

/// Component label per cell index under the movement rules; -1 for impassable.
std::vector<int> label_components(const GameMap& map) {
  std::vector<int> label(static_cast<std::size_t>(map.cell_count()), -1);
  int next = 0;
  for (int i = 0; i < map.cell_count(); ++i) {
    const HexCoord start = map.cell_at(i);
    if (label[static_cast<std::size_t>(i)] != -1 || !map.traversable(start)) continue;
    std::deque<HexCoord> frontier{start};
    label[static_cast<std::size_t>(i)] = next;
    while (!frontier.empty()) {
      const HexCoord c = frontier.front();
      frontier.pop_front();
      for (int d = 0; d < 6; ++d) {
        const HexCoord n = neighbor(c, Heading(d));
        if (!map.in_bounds(n) || !map.can_step(c, n)) continue;
        auto& l = label[static_cast<std::size_t>(map.index_of(n))];
        if (l != -1) continue;
        l = next;
        frontier.push_back(n);
      }
    }
    ++next;
  }
  return label;
}

std::vector<HexCoord> in_bounds_neighbors(const GameMap& map, HexCoord c) {
  std::vector<HexCoord> out;
  for (int d = 0; d < 6; ++d) {
    const HexCoord n = neighbor(c, Heading(d));
    if (map.in_bounds(n)) out.push_back(n);
  }
  return out;
}

std::vector<HexCoord> cells_within(const GameMap& map, HexCoord center, int lo, int hi) {
  std::vector<HexCoord> out;
  for (int dr = -hi; dr <= hi; ++dr) {
    for (int dq = -hi; dq <= hi; ++dq) {
      const HexCoord c{center.q + dq, center.r + dr};
      const int d = distance(center, c);
      if (d >= lo && d <= hi && map.in_bounds(c)) out.push_back(c);
    }
  }
  return out;
}

/// Grows a contiguous blob of `terrain` from a random grass seed cell.
std::vector<HexCoord> grow_blob(GameMap& map, DeterministicRng& rng, Terrain terrain, int size,
                                bool avoid_water) {
  const auto usable = [&](HexCoord c) {
    if (!map.in_bounds(c) || map.tile(c).terrain != Terrain::Grass) return false;
    if (!avoid_water) return true;
    for (HexCoord n : in_bounds_neighbors(map, c)) {
      if (map.tile(n).terrain == Terrain::Water) return false;
    }
    return true;
  };
  std::vector<HexCoord> seeds;
  for (HexCoord c : map.cells()) {
    if (usable(c)) seeds.push_back(c);
  }
  if (seeds.empty()) return {};
  std::vector<HexCoord> blob{seeds[static_cast<std::size_t>(rng.below(seeds.size()))]};
  map.set_tile(blob.front(), {terrain, default_elevation(terrain)});
  while (static_cast<int>(blob.size()) < size) {
    std::vector<HexCoord> frontier;
    std::set<HexCoord> seen;
    for (HexCoord b : blob) {
      for (HexCoord n : in_bounds_neighbors(map, b)) {
        if (usable(n) && seen.insert(n).second) frontier.push_back(n);
      }
    }
    if (frontier.empty()) break;
    const HexCoord pick = frontier[static_cast<std::size_t>(rng.below(frontier.size()))];
    map.set_tile(pick, {terrain, default_elevation(terrain)});
    blob.push_back(pick);
  }
  return blob;
}

/// Map where only the cells accepted by `allowed` are passable, for routing.
template <class Pred>
GameMap routing_mask(const GameMap& map, Pred allowed) {
  GameMap mask(map.rows(), map.cols());
  for (HexCoord c : map.cells()) {
    if (!allowed(c)) mask.set_tile(c, {Terrain::Water, 0});
  }
  return mask;
}

bool center_escapes(const GameMap& map, HexCoord center, int ring) {
  std::set<HexCoord> seen{center};
  std::deque<HexCoord> frontier{center};
  while (!frontier.empty()) {
    const HexCoord c = frontier.front();
    frontier.pop_front();
    if (distance(center, c) >= ring) return true;
    for (HexCoord n : in_bounds_neighbors(map, c)) {
      if (!map.traversable(n) || !seen.insert(n).second) continue;
      frontier.push_back(n);
    }
  }
  return false;
}

struct Attempt {
  GameMap map;
  GenerationTrace trace;
  bool ok = false;
};

bool place_towns(GameMap& map, const GenConfig& cfg, DeterministicRng& rng,
                 std::vector<HexCoord>& centers) {
  const int house_ring = std::max(1, cfg.town_radius / 2);
  const int min_separation = cfg.town_radius + 4;
  for (int t = 0; t < cfg.town_count; ++t) {
    std::vector<HexCoord> candidates;
    for (HexCoord c : map.cells()) {
      bool fits = true;
      for (HexCoord n : cells_within(map, c, 0, house_ring + 1)) {
        if (map.tile(n).terrain != Terrain::Grass || map.has_prop(n)) {
          fits = false;
          break;
        }
      }
      if (fits && cells_within(map, c, 0, house_ring + 1).size() <
                      static_cast<std::size_t>(1 + 3 * (house_ring + 1) * (house_ring + 2))) {
        fits = false;  // keep towns off the border
      }
      for (HexCoord other : centers) {
        if (distance(c, other) < min_separation) fits = false;
      }
      if (fits) candidates.push_back(c);
    }
    if (candidates.empty()) return false;
    const HexCoord center = candidates[static_cast<std::size_t>(rng.below(candidates.size()))];
    centers.push_back(center);
    map.set_tile(center, {Terrain::Path, 0});

    auto spots = cells_within(map, center, 1, house_ring);
    shuffle(spots, rng);
    const int want = rng.between(cfg.town_size_min, cfg.town_size_max);
    int placed = 0;
    for (HexCoord s : spots) {
      if (placed >= want) break;
      Prop house{PropKind::House, s,
                 HouseVariant{static_cast<RoofColor>(rng.below(5)), rng.between(1, 3)}};
      map.set_prop(house);
      if (!center_escapes(map, center, house_ring + 1)) {
        map.clear_prop(s);
        continue;
      }
      ++placed;
    }
  }
  return true;
}

bool route_paths(GameMap& map, const std::vector<HexCoord>& centers,
                 const std::vector<HexCoord>& ramps) {
  const auto paint = [&](const std::vector<HexCoord>& route) {
    for (HexCoord c : route) {
      if (map.tile(c).terrain == Terrain::Grass) map.set_tile(c, {Terrain::Path, 0});
    }
  };
  std::vector<HexCoord> connected;
  for (HexCoord c : centers) {
    if (connected.empty()) {
      connected.push_back(c);
      continue;
    }
    HexCoord target = connected.front();
    for (HexCoord k : connected) {
      if (distance(c, k) < distance(c, target)) target = k;
    }
    const GameMap mask = routing_mask(map, [&](HexCoord x) {
      return is_ground(map.tile(x).terrain) && !map.has_prop(x);
    });
    auto route = shortest_path(mask, c, target);
    if (!route) return false;
    paint(*route);
    connected.push_back(c);
  }
  if (connected.empty()) return true;
  for (HexCoord ramp : ramps) {
    HexCoord target = connected.front();
    for (HexCoord k : connected) {
      if (distance(ramp, k) < distance(ramp, target)) target = k;
    }
    const GameMap mask = routing_mask(map, [&](HexCoord x) {
      return x == ramp || (is_ground(map.tile(x).terrain) && !map.has_prop(x));
    });
    if (auto route = shortest_path(mask, ramp, target)) paint(*route);
  }
  return true;
}

void scatter_props(GameMap& map, const GenConfig& cfg, DeterministicRng& rng,
                   const std::vector<HexCoord>& centers) {
  const auto near_feature = [&](HexCoord c) {
    for (HexCoord n : in_bounds_neighbors(map, c)) {
      if (map.tile(n).terrain == Terrain::Ramp) return true;
    }
    for (HexCoord k : centers) {
      if (distance(c, k) <= 1) return true;
    }
    return false;
  };
  const auto roll = [&](double p) { return static_cast<double>(rng.below(1'000'000)) < p * 1e6; };
  for (HexCoord c : map.cells()) {
    if (map.tile(c).terrain != Terrain::Path) continue;
    if (!roll(cfg.streetlight_density)) continue;
    auto sides = in_bounds_neighbors(map, c);
    shuffle(sides, rng);
    for (HexCoord s : sides) {
      if (map.tile(s).terrain == Terrain::Grass && !map.has_prop(s) && !near_feature(s)) {
        map.set_prop({PropKind::Streetlight, s, std::nullopt});
        break;
      }
    }
  }
  for (HexCoord c : map.cells()) {
    const Terrain t = map.tile(c).terrain;
    if (map.has_prop(c) || near_feature(c)) continue;
    if (t == Terrain::Grass && roll(cfg.tree_density)) {
      map.set_prop({PropKind::Tree, c, std::nullopt});
    } else if ((t == Terrain::Grass || t == Terrain::Mountain) && roll(cfg.rock_density)) {
      map.set_prop({PropKind::Rock, c, std::nullopt});
    }
  }
}

bool place_cards_and_spawns(GameMap& map, const GenConfig& cfg, DeterministicRng& rng) {
  const auto labels = label_components(map);
  std::vector<int> sizes;
  for (int l : labels) {
    if (l < 0) continue;
    if (static_cast<std::size_t>(l) >= sizes.size()) sizes.resize(static_cast<std::size_t>(l) + 1);
    ++sizes[static_cast<std::size_t>(l)];
  }
  if (sizes.empty()) return false;
  const int biggest = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<HexCoord> pool;
  for (int i = 0; i < map.cell_count(); ++i) {
    if (labels[static_cast<std::size_t>(i)] == biggest) pool.push_back(map.cell_at(i));
  }
  if (static_cast<int>(pool.size()) < cfg.card_count + 2) return false;
  shuffle(pool, rng);
  map.leader_spawn = pool[0];
  map.follower_spawn = pool[1];
  map.initial_cards.clear();
  for (int i = 0; i < cfg.card_count; ++i) {
    Card card;
    card.id = i;
    card.cell = pool[static_cast<std::size_t>(i + 2)];
    card.face.color = static_cast<Color>(rng.below(kMaxColors));
    card.face.shape = static_cast<Shape>(rng.below(kMaxShapes));
    card.face.count = rng.between(1, kMaxCardCount);
    map.initial_cards.push_back(card);
  }
  return true;
}

Attempt attempt_generation(const GenConfig& cfg, std::uint32_t offset) {
  Attempt a;
  a.map = GameMap(cfg.rows, cfg.cols);
  DeterministicRng rng(cfg.seed * 0x100000001B3ULL + offset);
  GameMap& map = a.map;

  for (int i = 0; i < cfg.lake_count; ++i) {
    grow_blob(map, rng, Terrain::Water, rng.between(cfg.lake_size_min, cfg.lake_size_max), false);
  }
  std::vector<std::vector<HexCoord>> mountains;
  for (int i = 0; i < cfg.mountain_count; ++i) {
    mountains.push_back(grow_blob(map, rng, Terrain::Mountain,
                                  rng.between(cfg.mountain_size_min, cfg.mountain_size_max),
                                  true));
  }
  for (const auto& blob : mountains) {
    std::vector<HexCoord> candidates;
    std::set<HexCoord> seen;
    for (HexCoord b : blob) {
      for (HexCoord n : in_bounds_neighbors(map, b)) {
        if (map.tile(n).terrain != Terrain::Grass || !seen.insert(n).second) continue;
        const auto ns = in_bounds_neighbors(map, n);
        const bool has_ground = std::any_of(ns.begin(), ns.end(), [&](HexCoord x) {
          return is_ground(map.tile(x).terrain);
        });
        if (has_ground) candidates.push_back(n);
      }
    }
    shuffle(candidates, rng);
    int made = 0;
    for (HexCoord c : candidates) {
      if (made >= cfg.ramps_per_mountain) break;
      // A ramp must keep a ground neighbour after earlier ramps were placed.
      const auto ns = in_bounds_neighbors(map, c);
      if (!std::any_of(ns.begin(), ns.end(),
                       [&](HexCoord x) { return is_ground(map.tile(x).terrain); })) {
        continue;
      }
      map.set_tile(c, {Terrain::Ramp, 0});
      a.trace.ramps.push_back(c);
      ++made;
    }
  }

  if (!place_towns(map, cfg, rng, a.trace.town_centers)) return a;
  if (!route_paths(map, a.trace.town_centers, a.trace.ramps)) return a;
  scatter_props(map, cfg, rng, a.trace.town_centers);

  for (int repair = 0; repair < kMaxRepairs; ++repair) {
    if (!place_cards_and_spawns(map, cfg, rng)) return a;
    if (validate_map(map, cfg.card_count).ok) {
      a.ok = true;
      return a;
    }
  }
  return a;
}

void check_feasible(const GenConfig& c) {
  if (c.rows <= 0 || c.cols <= 0) throw InfeasibleConfig("map dimensions must be positive");
  if (c.town_count < 0 || c.lake_count < 0 || c.mountain_count < 0 || c.card_count < 0) {
    throw InfeasibleConfig("feature counts must be non-negative");
  }
  if (c.town_size_min < 0 || c.town_size_min > c.town_size_max || c.lake_size_min < 1 ||
      c.lake_size_min > c.lake_size_max || c.mountain_size_min < 1 ||
      c.mountain_size_min > c.mountain_size_max) {
    throw InfeasibleConfig("size ranges must be non-empty");
  }
  if (c.town_radius < 2 && c.town_count > 0) throw InfeasibleConfig("town_radius must be >= 2");
  if (c.tree_density < 0 || c.rock_density < 0 || c.streetlight_density < 0 ||
      c.tree_density + c.rock_density > 0.5) {
    throw InfeasibleConfig("prop densities out of range");
  }
  const double cells = static_cast<double>(c.rows) * c.cols;
  const double blocked = static_cast<double>(c.lake_count) * c.lake_size_max +
                         static_cast<double>(c.town_count) * c.town_size_max +
                         (c.tree_density + c.rock_density) * cells;
  if (blocked + c.card_count + 2 > cells) {
    throw InfeasibleConfig("cards, props and spawns exceed the traversable area");
  }
}

}  // namespace

GameMap generate_map(const GenConfig& config, GenerationTrace* trace) {
  check_feasible(config);
  for (std::uint32_t offset = 0; offset < kMaxRegenerations; ++offset) {
    Attempt a = attempt_generation(config, offset);
    if (!a.ok) continue;
    a.map.seed = config.seed;
    a.map.seed_offset = offset;
    if (trace) *trace = std::move(a.trace);
    return std::move(a.map);
  }
  throw InfeasibleConfig("no valid map after repeated regeneration");
}

ValidationReport validate_map(const GameMap& map, std::optional<int> expected_card_count) {
  ValidationReport report;
  const auto fail = [&](std::string msg) {
    report.ok = false;
    report.failures.push_back(std::move(msg));
  };
  if (map.rows() <= 0 || map.cols() <= 0) {
    fail("empty map");
    return report;
  }

  const HexCoord spawns[2] = {map.leader_spawn, map.follower_spawn};
  const char* names[2] = {"leader spawn", "follower spawn"};
  for (int i = 0; i < 2; ++i) {
    if (!map.traversable(spawns[i])) fail(std::string(names[i]) + " not traversable at " + cell_str(spawns[i]));
  }
  if (map.leader_spawn == map.follower_spawn) fail("spawns share a cell");

  std::set<HexCoord> card_cells;
  for (const auto& c : map.initial_cards) {
    if (!map.in_bounds(c.cell)) {
      fail("card " + std::to_string(c.id) + " out of bounds");
      continue;
    }
    if (!map.traversable(c.cell)) fail("card " + std::to_string(c.id) + " on impassable cell " + cell_str(c.cell));
    if (!card_cells.insert(c.cell).second) fail("cell conflict: two cards at " + cell_str(c.cell));
    if (c.cell == map.leader_spawn || c.cell == map.follower_spawn) {
      fail("cell conflict: card " + std::to_string(c.id) + " on a spawn");
    }
    if (c.face.count < 1 || c.face.count > kMaxCardCount) {
      fail("card " + std::to_string(c.id) + " has an invalid count");
    }
  }

  for (HexCoord c : map.cells()) {
    if (map.tile(c).terrain != Terrain::Ramp) continue;
    bool mountain = false;
    bool ground = false;
    for (HexCoord n : in_bounds_neighbors(map, c)) {
      mountain = mountain || map.tile(n).terrain == Terrain::Mountain;
      ground = ground || is_ground(map.tile(n).terrain);
    }
    if (!mountain || !ground) fail("ramp at " + cell_str(c) + " lacks a mountain or ground neighbour");
  }

  if (map.traversable(map.leader_spawn)) {
    const auto labels = label_components(map);
    const int home = labels[static_cast<std::size_t>(map.index_of(map.leader_spawn))];
    const auto label_of = [&](HexCoord c) {
      return map.in_bounds(c) ? labels[static_cast<std::size_t>(map.index_of(c))] : -1;
    };
    if (map.traversable(map.follower_spawn) && label_of(map.follower_spawn) != home) {
      fail("unreachable follower spawn at " + cell_str(map.follower_spawn));
    }
    for (const auto& c : map.initial_cards) {
      if (map.traversable(c.cell) && label_of(c.cell) != home) {
        fail("unreachable card " + std::to_string(c.id) + " at " + cell_str(c.cell));
      }
    }
  }

  if (expected_card_count && static_cast<int>(map.initial_cards.size()) != *expected_card_count) {
    fail("card count " + std::to_string(map.initial_cards.size()) + " does not match expected " +
         std::to_string(*expected_card_count));
  }
  return report;
}

}  // namespace cb2
