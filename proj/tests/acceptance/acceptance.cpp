// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <future>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "cb2/client.hpp"
#include "cb2/gamecore.hpp"
#include "cb2/local_game.hpp"
#include "cb2/lobby.hpp"
#include "cb2/mapgen.hpp"
#include "cb2/portal.hpp"
#include "cb2/protocol.hpp"
#include "cb2/replay.hpp"
#include "cb2/serialize.hpp"
#include "cb2/server.hpp"
#include "support/generators.hpp"
#include "support/net_helpers.hpp"
#include "unit/oracles.hpp"

using namespace cb2;
using namespace std::chrono_literals;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class... Parts>
void need(bool ok, const Parts&... parts) {
  if (ok) return;
  std::ostringstream os;
  (os << ... << parts);
  throw Failure(os.str());
}

// Logs gathered by the networked runs, reused for turn accounting.
std::vector<std::vector<GameEvent>> g_network_logs;

ConnectOptions bot(int port, const std::string& lobby, const std::string& name) {
  ConnectOptions o;
  o.port = port;
  o.lobby_id = lobby;
  o.display_name = name;
  o.connect_timeout = 5s;
  o.pair_timeout = 30s;
  o.step_timeout = 60s;
  return o;
}

struct NetGame {
  GameId id = 0;
  StepResult leader;
  StepResult follower;
};

NetGame play_networked(int port, const std::string& lobby, const std::string& tag) {
  auto other = std::async(std::launch::async, [&] { return connect(bot(port, lobby, tag + "-b")); });
  auto a = connect(bot(port, lobby, tag + "-a"));
  auto b = other.get();
  need(a->game_id() == b->game_id(), "paired sessions disagree on the game id");
  NetSession& leader = a->role() == Role::Leader ? *a : *b;
  NetSession& follower = a->role() == Role::Leader ? *b : *a;
  need(leader.role() != follower.role(), "both sessions got the same role");
  auto [l, f] = play_bots(leader, follower);
  return {a->game_id(), l, f};
}

double median_of(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// Axial hex distance written out directly; checked against BFS before use.
int axial_distance(HexCoord a, HexCoord b) {
  const int dq = a.q - b.q;
  const int dr = a.r - b.r;
  return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

// ---------------------------------------------------------------------------

std::string set_validity() {
  const auto faces = oracle::all_faces();
  need(faces.size() == 108, "expected 108 card types, got ", faces.size());
  long cases = 0;
  long valid = 0;
  std::vector<CardFace> t(3);
  for (std::size_t i = 0; i < faces.size(); ++i) {
    for (std::size_t j = i + 1; j < faces.size(); ++j) {
      for (std::size_t k = j + 1; k < faces.size(); ++k) {
        t = {faces[i], faces[j], faces[k]};
        const bool expect = oracle::brute_force_valid(faces[i], faces[j], faces[k]);
        need(is_valid_set(t) == expect, "disagreement at triple ", i, ",", j, ",", k);
        ++cases;
        valid += expect;
      }
    }
  }
  need(cases == 108L * 107 * 106 / 6, "enumerated ", cases, " triples");
  return std::to_string(cases) + " triples, " + std::to_string(valid) + " valid";
}

std::string map_determinism() {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenConfig g;
    g.seed = seed;
    const GameMap a = generate_map(g);
    const GameMap b = generate_map(g);
    need(to_canonical(a) == to_canonical(b), "seed ", seed, " is not reproducible");
    const auto report = validate_map(a, g.card_count);
    need(report.ok, "seed ", seed, ": ", report.failures.empty() ? "" : report.failures.front());
  }
  return "100 seeds";
}

std::string replay_fidelity() {
  constexpr int kLanes = 5;
  constexpr int kGames = 50;
  const auto dir = support::scratch_dir("acceptance-replay");
  ServerConfig c;
  c.port = 0;
  c.data_dir = dir;
  c.threads = 4;
  c.map_pool_size = kLanes;
  c.map_seed = 500;
  for (int lane = 0; lane < kLanes; ++lane) {
    c.lobbies.push_back({"bots" + std::to_string(lane), PairingPolicy::BotBot, RoomType::Game, {}});
  }
  Server server(c);
  server.start();

  std::vector<std::future<std::vector<GameId>>> lanes;
  for (int lane = 0; lane < kLanes; ++lane) {
    lanes.push_back(std::async(std::launch::async, [&, lane] {
      std::vector<GameId> ids;
      for (int g = lane; g < kGames; g += kLanes) {
        const NetGame r = play_networked(server.port(), "bots" + std::to_string(lane), "r" + std::to_string(g));
        need(r.leader.game_over && !r.leader.abandoned, "game ", r.id, " did not finish");
        ids.push_back(r.id);
      }
      return ids;
    }));
  }
  std::vector<GameId> ids;
  for (auto& f : lanes) {
    for (GameId id : f.get()) ids.push_back(id);
  }
  server.stop();

  // Reopen the file the server wrote.
  EventStore store((dir / "games.sqlite").string());
  for (GameId id : ids) {
    const auto rec = store.record(id);
    need(rec && rec->status == GameStatus::Over, "game ", id, " not recorded as over");
    need(rec->final_hash.has_value(), "game ", id, " has no live hash");
    auto log = store.events(id);
    need(static_cast<std::int64_t>(log.size()) == rec->event_count, "game ", id, " event count mismatch");
    need(state_hash(replay(log)) == *rec->final_hash, "game ", id, " folds to a different state");
    g_network_logs.push_back(std::move(log));
  }
  need(ids.size() == kGames, "played ", ids.size(), " games");
  return std::to_string(ids.size()) + " games";
}

std::string cross_mode() {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ServerConfig c;
    c.port = 0;
    c.data_dir = ":memory:";
    c.threads = 2;
    c.map_pool_size = 1;
    c.map_seed = 9000 + seed;
    c.lobbies = {{"bots", PairingPolicy::BotBot, RoomType::Game, {}}};
    Server server(c, [] { return Timestamp{0}; });
    server.start();
    const NetGame r = play_networked(server.port(), "bots", "x" + std::to_string(seed));
    const auto remote = server.store().events(r.id);
    server.stop();

    GenConfig g = c.mapgen;
    g.seed = c.map_seed;
    const GameMap map = generate_map(g);
    const SelfPlayResult local = play_local(map, c.game, map.seed);
    need(!remote.empty() && remote.front().is<event::GameStart>(), "seed ", seed, ": log has no GameStart");
    need(remote.front().as<event::GameStart>()->map == map, "seed ", seed, ": server used a different map");
    need(remote.size() == local.events.size(), "seed ", seed, ": ", remote.size(), " vs ", local.events.size(),
         " events");
    for (std::size_t i = 0; i < remote.size(); ++i) {
      GameEvent a = remote[i];
      GameEvent b = local.events[i];
      a.game_id = b.game_id = 0;
      a.wall_time = b.wall_time = 0;
      need(to_canonical(a) == to_canonical(b), "seed ", seed, ": event ", i, " differs");
    }
  }
  return "20 seeds";
}

std::string protocol_roundtrip() {
  gen::MessageGenerator g(2024);
  const auto& kinds = all_kind_names();
  need(kinds.size() == std::variant_size_v<Payload>, "kind table is incomplete");
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    for (int i = 0; i < 1000; ++i) {
      const WireMessage m = g.message(k);
      need(kind_name(m.payload) == kinds[k], "generator produced the wrong kind");
      const auto back = decode(encode(m));
      need(std::holds_alternative<WireMessage>(back) && std::get<WireMessage>(back) == m, kinds[k],
           " message ", i, " does not round-trip");
    }
  }
  auto& rng = g.rng();
  long errors = 0;
  for (int i = 0; i < 100000; ++i) {
    std::string bytes(rng() % 96, '\0');
    for (auto& ch : bytes) ch = static_cast<char>(rng());
    if (i % 2) {
      // Half the inputs start from a valid message so the decoder gets past the JSON parse.
      bytes = encode(g.message(rng() % kinds.size()));
      for (int flips = 1 + static_cast<int>(rng() % 4); flips > 0; --flips) bytes[rng() % bytes.size()] = static_cast<char>(rng());
    }
    try {
      errors += std::holds_alternative<ProtocolError>(decode(bytes));
    } catch (const std::exception& e) {
      throw Failure(std::string("decoder threw: ") + e.what());
    }
  }
  return std::to_string(kinds.size()) + " kinds x 1000, 100000 fuzz inputs (" + std::to_string(errors) +
         " rejected)";
}

// Checks one log using only the events themselves.
void check_turn_accounting(const std::vector<GameEvent>& log, const std::string& name) {
  need(!log.empty(), name, ": empty log");
  const auto* start = log.front().as<event::GameStart>();
  need(start != nullptr, name, ": first event is not GameStart");
  const GameConfig& cfg = start->config;
  const auto budget = [&](Role r) {
    return r == Role::Leader ? cfg.leader_steps_per_turn : cfg.follower_steps_per_turn;
  };
  Role active = Role::Leader;
  int turns_left = cfg.initial_turns;
  int turn_number = 0;
  int moves = 0;
  int sets = 0;
  if (start->initial_state) {
    active = start->initial_state->turn.active_role;
    turns_left = start->initial_state->turn.turns_remaining;
    turn_number = start->initial_state->turn.turn_number;
    moves = budget(active) - start->initial_state->turn.steps_remaining;
    sets = start->initial_state->turn.sets_collected;
  }
  bool over = false;
  for (std::size_t i = 1; i < log.size(); ++i) {
    const GameEvent& e = log[i];
    need(!over, name, ": event after GameOver");
    const std::string at = name + " seq " + std::to_string(e.seq);
    if (const auto* m = e.as<event::Move>()) {
      need(m->role == active, at, ": move by the inactive role");
      need(e.actor == actor_of(active), at, ": move attributed to another actor");
      ++moves;
      need(moves <= budget(active), at, ": ", moves, " moves exceed the budget of ", budget(active));
      need(m->steps_remaining == budget(active) - moves, at, ": steps_remaining ", m->steps_remaining,
           " after ", moves, " moves");
    } else if (const auto* t = e.as<event::TurnTransition>()) {
      need(t->from_role == active && t->to_role != active, at, ": turns do not alternate");
      need(t->turn_number == turn_number + 1, at, ": turn number skipped");
      need(t->turns_remaining == std::max(0, turns_left - 1), at, ": turns_remaining ", t->turns_remaining,
           " expected ", std::max(0, turns_left - 1));
      need(t->steps_remaining == budget(t->to_role), at, ": new turn does not start with the full budget");
      if (t->reason == TurnReason::StepsExhausted) need(moves == budget(active), at, ": early steps_exhausted");
      active = t->to_role;
      turns_left = t->turns_remaining;
      turn_number = t->turn_number;
      moves = 0;
    } else if (const auto* s = e.as<event::SetCompleted>()) {
      ++sets;
      const auto& sched = cfg.turn_bonus_schedule;
      const int expect = sets <= static_cast<int>(sched.size()) ? sched[static_cast<std::size_t>(sets - 1)] : 0;
      need(s->bonus_turns == expect, at, ": set ", sets, " granted ", s->bonus_turns, " bonus turns, schedule says ",
           expect);
      turns_left += s->bonus_turns;
    } else if (e.is<event::GameOver>()) {
      over = true;
    } else if (e.is<event::InstructionSent>() || e.is<event::InstructionCancelled>()) {
      need(active == Role::Leader && e.actor == Actor::Leader, at, ": instruction op outside the leader's turn");
    } else if (e.is<event::InstructionDone>()) {
      need(active == Role::Follower && e.actor == Actor::Follower, at, ": done outside the follower's turn");
    }
  }
}

std::string turn_accounting() {
  std::vector<std::pair<std::string, std::vector<GameEvent>>> logs;
  for (std::size_t i = 0; i < g_network_logs.size(); ++i) {
    logs.emplace_back("networked game " + std::to_string(i), g_network_logs[i]);
  }
  // Local games over varied budgets and schedules.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GenConfig g;
    g.seed = 300 + seed;
    const GameMap map = generate_map(g);
    GameConfig c;
    c.leader_steps_per_turn = 2 + static_cast<int>(seed % 5);
    c.follower_steps_per_turn = 4 + static_cast<int>(seed % 9);
    c.initial_turns = 6 + static_cast<int>(seed % 10);
    if (seed % 3 == 0) c.turn_bonus_schedule = {3, 1};
    logs.emplace_back("local game " + std::to_string(seed), play_local(map, c, map.seed).events);
  }
  need(logs.size() >= 30, "only ", logs.size(), " logs");
  long moves = 0;
  for (const auto& [name, log] : logs) {
    check_turn_accounting(log, name);
    moves += std::count_if(log.begin(), log.end(), [](const GameEvent& e) { return e.is<event::Move>(); });
  }
  return std::to_string(logs.size()) + " logs, " + std::to_string(moves) + " moves";
}

std::string visibility() {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 500; ++i) {
    const HexCoord a{static_cast<int>(rng() % 30) - 15, static_cast<int>(rng() % 30) - 15};
    const HexCoord b{static_cast<int>(rng() % 30) - 15, static_cast<int>(rng() % 30) - 15};
    need(axial_distance(a, b) == oracle::bfs_distance(a, b), "distance formula disagrees with BFS");
  }

  int states = 0;
  long tiles_checked = 0;
  int hidden_checked = 0;
  for (std::uint64_t seed = 0; states < 10000; ++seed) {
    GenConfig g;
    g.seed = 700 + seed;
    const GameMap map = generate_map(g);
    GameConfig c;
    c.initial_turns = 60;
    c.fog_range = 2 + static_cast<int>(seed % 12);
    c.fov_degrees = std::array<double, 4>{90.0, 180.0, 210.0, 360.0}[seed % 4];
    c.hide_card_patterns = seed % 2 == 0;
    GameState s = new_game(map, c, map.seed);
    for (int step = 0; step < 400 && !s.over && states < 10000; ++step) {
      const Role r = s.turn.active_role;
      const auto kinds = legal_actions(s, r);
      ActionKind k = kinds[rng() % kinds.size()];
      if (k == ActionKind::EndTurn && rng() % 4) k = ActionKind::Noop;
      const auto res = apply_action(s, r, Action{k, "forward 2"}, 0);
      need(res.accepted(), "legal action refused");
      s = res.state;
      ++states;

      const Observation o = observe(s, Role::Follower);
      const Pose& pose = s.follower_pose;
      const auto visible = [&](HexCoord cell) {
        return map.in_bounds(cell) && axial_distance(pose.cell, cell) <= c.fog_range &&
               (cell == pose.cell || oracle::in_cone_by_dot(pose, cell, c.fov_degrees));
      };
      std::set<HexCoord> expect;
      for (HexCoord cell : map.cells()) {
        if (visible(cell)) expect.insert(cell);
      }
      std::set<HexCoord> seen;
      for (const auto& t : o.tiles) {
        need(visible(t.cell), "state ", states, ": tile ", t.cell.q, ",", t.cell.r, " outside the view");
        seen.insert(t.cell);
      }
      need(seen == expect, "state ", states, ": visible tiles differ from the view cone");
      tiles_checked += static_cast<long>(seen.size());
      for (const auto& p : o.props) need(visible(p.cell), "state ", states, ": prop outside the view");
      for (const auto& v : o.cards) {
        need(visible(v.cell), "state ", states, ": card outside the view");
        if (c.hide_card_patterns && !v.selected) {
          need(!v.face.has_value(), "state ", states, ": unselected card pattern leaked");
          ++hidden_checked;
        }
      }
      if (o.other_pose) need(visible(o.other_pose->cell), "state ", states, ": leader shown outside the view");
      for (const auto& ins : o.instructions) {
        need(ins.status != InstructionStatus::Queued, "state ", states, ": queued instruction visible");
      }
    }
  }
  return std::to_string(states) + " states, " + std::to_string(tiles_checked) + " tiles, " +
         std::to_string(hidden_checked) + " hidden cards";
}

std::string competence() {
  std::vector<int> scores;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GenConfig g;
    g.seed = seed;
    const GameMap map = generate_map(g);
    const SelfPlayResult r = play_local(map, GameConfig{}, map.seed, false);
    need(!r.abandoned, "seed ", seed, " abandoned");
    need(r.score >= 1, "seed ", seed, " completed no set");
    scores.push_back(r.score);
  }
  const double med = median_of(scores);
  need(med >= 3.0, "median score ", med);
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  std::ostringstream os;
  os << "median " << med << ", min " << *lo << ", max " << *hi;
  return os.str();
}

std::string pairing() {
  std::mt19937_64 rng(99);
  int qualified_pairs = 0;
  int mixed_pairs = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const PairingPolicy policy = trial % 5 == 4 ? PairingPolicy::BotBot : PairingPolicy::HumanHuman;
    const bool bots = policy == PairingPolicy::BotBot;
    Lobby lobby("l", policy);
    std::map<std::string, std::pair<bool, std::vector<int>>> truth;
    const int arrivals = 2 + static_cast<int>(rng() % 14);
    for (int i = 0; i < arrivals; ++i) {
      msg::JoinLobby j;
      j.lobby_id = "l";
      j.display_name = "p" + std::to_string(i);
      const bool leader = rng() % 3 != 0;
      j.qualifications = leader ? std::vector<Role>{Role::Leader, Role::Follower} : std::vector<Role>{Role::Follower};
      j.is_bot = bots;
      std::vector<int> scores(rng() % 11);
      for (int& s : scores) s = static_cast<int>(rng() % 9);
      truth[j.display_name] = {leader, scores};
      need(std::holds_alternative<int>(lobby.join(static_cast<ConnId>(i + 1), j, scores)), "join refused");
      while (auto p = lobby.try_pair()) {
        const auto& [l_qual, l_scores] = truth.at(p->leader.display_name);
        const auto& [f_qual, f_scores] = truth.at(p->follower.display_name);
        const auto mean = [](const std::vector<int>& v) {
          return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        };
        need(l_qual || f_qual, "trial ", trial, ": two follower-only players paired");
        if (l_qual && f_qual) {
          ++qualified_pairs;
          need(mean(l_scores) >= mean(f_scores), "trial ", trial, ": leader mean ", mean(l_scores), " < follower mean ",
               mean(f_scores));
        } else {
          ++mixed_pairs;
          need(l_qual, "trial ", trial, ": novice assigned to lead an expert");
        }
      }
    }
  }
  need(qualified_pairs > 0 && mixed_pairs > 0, "both pair types must occur");
  return "1000 sequences, " + std::to_string(qualified_pairs) + " qualified pairs, " + std::to_string(mixed_pairs) +
         " expert+novice pairs";
}

std::string portal() {
  ServerConfig c;
  c.port = 0;
  c.data_dir = support::scratch_dir("acceptance-portal");
  c.threads = 2;
  c.map_pool_size = 1;
  c.lobbies = {{"bots", PairingPolicy::BotBot, RoomType::Game, {}}};
  Server server(c);
  server.start();

  // Finished local games with spread-out scores, their scores taken from the logs.
  std::vector<int> log_scores;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    GenConfig g;
    g.seed = 40 + seed;
    const GameMap map = generate_map(g);
    GameConfig cfg;
    cfg.initial_turns = 2 + static_cast<int>(seed % 8) * 2;
    SelfPlayResult r = play_local(map, cfg, map.seed);
    const GameId id = server.store().create_game("bots", {"ann" + std::to_string(seed % 3), "bob"});
    for (auto& e : r.events) e.game_id = id;
    server.store().append(r.events);
    server.store().set_final_hash(id, r.final_hash);
    log_scores.push_back(r.events.back().as<event::GameOver>()->score);
  }
  // One networked game, one abandoned networked game, one still live.
  const NetGame played = play_networked(server.port(), "bots", "n");
  log_scores.push_back(played.leader.score);
  {
    auto other = std::async(std::launch::async, [&] { return connect(bot(server.port(), "bots", "q1")); });
    auto a = connect(bot(server.port(), "bots", "q2"));
    auto b = other.get();
    a->leave();
    b->initial();
  }
  const GameId live = server.store().create_game("bots", {"x", "y"});
  {
    const GameMap map = generate_map(GenConfig{});
    GameEvent e = start_event(new_game(map, GameConfig{}, map.seed), map.seed, 0);
    e.game_id = live;
    server.store().append(e);
  }

  const auto get = [&](const std::string& target) {
    const auto r = support::http_request(server.port(), target);
    need(r.status == 200, target, " returned ", r.status);
    return json::parse(r.body);
  };
  const json stats = get("/data/stats");
  const json list = get("/data/games?limit=1000");
  std::vector<int> listed_scores;
  for (const auto& g : list.at("games")) {
    if (g.at("status") == "over") listed_scores.push_back(g.at("score").get<int>());
  }
  std::vector<int> a = listed_scores, b = log_scores;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  need(a == b, "listed scores differ from the scores in the event logs");
  const double mean = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(b.size());
  need(stats.at("game_count").get<std::int64_t>() == static_cast<std::int64_t>(b.size()), "game_count mismatch");
  need(std::abs(stats.at("mean_score").get<double>() - mean) < 1e-9, "mean ", stats.at("mean_score"), " expected ",
       mean);
  need(std::abs(stats.at("median_score").get<double>() - median_of(b)) < 1e-9, "median ", stats.at("median_score"),
       " expected ", median_of(b));

  // Archive through HTTP, imported into a fresh store.
  const json archive = get("/data/archive");
  EventStore copy;
  import_archive(copy, archive.at("files").get<std::map<std::string, std::string>>());
  const HttpReply copied = handle_portal(copy, "GET", "/data/stats");
  need(copied.status == 200 && json::parse(copied.body) == stats, "imported archive has different stats");

  // Replay links.
  int links = 0;
  for (const auto& g : list.at("games")) {
    const GameId id = g.at("game_id").get<GameId>();
    for (const json& rec : {g, get("/data/games/" + std::to_string(id))}) {
      const std::string url = rec.at("replay_url").get<std::string>();
      const auto pos = url.find("replay_game=");
      need(url.starts_with("/play") && pos != std::string::npos, "bad replay url ", url);
      need(std::stoll(url.substr(pos + 12)) == id, "replay url ", url, " names the wrong game");
      ++links;
    }
  }
  server.stop();
  return std::to_string(b.size()) + " finished of " + std::to_string(list.at("games").size()) + " games, " +
         std::to_string(links) + " replay links";
}

struct Criterion {
  int number;
  const char* name;
  std::chrono::seconds limit;
  std::function<std::string()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "set validity vs brute force", 10s, set_validity},
      {2, "map determinism and validity", 60s, map_determinism},
      {3, "replay fidelity (networked)", 120s, replay_fidelity},
      {4, "local vs networked event logs", 120s, cross_mode},
      {5, "protocol round trip and fuzz", 60s, protocol_roundtrip},
      {6, "turn accounting from logs", 300s, turn_accounting},
      {7, "follower visibility", 300s, visibility},
      {8, "self-play competence", 300s, competence},
      {9, "pairing policy", 60s, pairing},
      {10, "data portal", 120s, portal},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.number)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && secs > static_cast<double>(c.limit.count())) {
      ok = false;
      detail += " (over the time limit)";
    }
    failed += !ok;
    std::printf("%s  %2d  %-32s %7.2fs / %3llds  %s\n", ok ? "PASS" : "FAIL", c.number, c.name, secs,
                static_cast<long long>(c.limit.count()), detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
