#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <thread>

#include <unistd.h>
#include <numeric>

#include "cb2/event_store.hpp"
#include "cb2/local_game.hpp"
#include "cb2/portal.hpp"
#include "cb2/replay.hpp"
#include "unit/fixtures.hpp"

using namespace cb2;

namespace {

std::vector<GameEvent> renumbered(std::vector<GameEvent> log, GameId id) {
  for (auto& e : log) e.game_id = id;
  return log;
}

// Stores a finished self-play game and returns its id.
GameId store_selfplay(EventStore& store, std::uint64_t seed, const std::string& leader = "ann",
                      const std::string& follower = "bob") {
  const GameMap m = generate_map(fixture::small_gen(seed));
  const auto result = play_local(m, GameConfig{}, m.seed);
  const GameId id = store.create_game("main", {leader, follower});
  store.append(renumbered(result.events, id));
  store.set_final_hash(id, result.final_hash);
  return id;
}

// Minimal finished game with a chosen final score.
GameId store_scored(EventStore& store, int score, const std::string& leader = "ann") {
  const GameId id = store.create_game("main", {leader, "bob"});
  const GameState s = fixture::open_game();
  std::vector<GameEvent> log{start_event(s, 1, 0)};
  GameEvent over;
  over.body = event::GameOver{score};
  log.push_back(over);
  EventNumbering n{id, 0};
  n.stamp(log);
  store.append(log);
  return id;
}

double mean_of(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

TEST_CASE("append enforces density and terminal rules") {
  EventStore store;
  const GameId id = store.create_game("main", {"ann", "bob"});
  const GameState s = fixture::open_game();
  GameEvent start = start_event(s, 1, 0);
  start.game_id = id;

  GameEvent skip = start;
  skip.seq = 2;
  skip.body = event::TimerExpired{0};
  CHECK_THROWS_AS(store.append(skip), StoreError);

  GameEvent not_start = skip;
  not_start.seq = 0;
  CHECK_THROWS_AS(store.append(not_start), StoreError);

  store.append(start);
  CHECK_THROWS_AS(store.append(start), StoreError);  // duplicate seq 0

  GameEvent jump = start;
  jump.seq = 2;
  jump.body = event::TimerExpired{0};
  CHECK_THROWS_AS(store.append(jump), StoreError);

  GameEvent over = start;
  over.seq = 1;
  over.wall_time = 77;
  over.body = event::GameOver{4};
  store.append(over);
  GameEvent late = start;
  late.seq = 2;
  late.body = event::TimerExpired{0};
  CHECK_THROWS_AS(store.append(late), StoreError);

  const auto rec = store.record(id);
  REQUIRE(rec);
  CHECK(rec->status == GameStatus::Over);
  CHECK(rec->score == 4);
  CHECK(rec->event_count == 2);
  CHECK(rec->end_time == 77);
  CHECK(store.events(id).size() == 2);
  CHECK_THROWS_AS(store.append(GameEvent{}), StoreError);  // unknown game 0
}

TEST_CASE("a failed batch leaves nothing behind") {
  EventStore store;
  const GameId id = store.create_game("main", {"ann", "bob"});
  std::vector<GameEvent> log{start_event(fixture::open_game(), 1, 0), GameEvent{}};
  log[1].body = event::TimerExpired{0};
  EventNumbering{id, 0}.stamp(log);
  log[1].seq = 5;
  CHECK_THROWS_AS(store.append(log), StoreError);
  CHECK(store.events(id).empty());
  CHECK(store.record(id)->event_count == 0);
}

TEST_CASE("concurrent appends to many games") {
  const auto path = std::filesystem::temp_directory_path() / ("cb2-concurrent-" + std::to_string(::getpid()) + ".sqlite");
  std::filesystem::remove(path);
  {
    EventStore store(path.string());
    const GameMap m = generate_map(fixture::small_gen(3));
    const auto game = play_local(m, GameConfig{}, m.seed);
    constexpr int kWriters = 6;
    std::vector<GameId> ids;
    for (int i = 0; i < kWriters; ++i) ids.push_back(store.create_game("main", {"a", "b"}));
    std::vector<std::thread> writers;
    std::atomic<int> refused = 0;
    for (int w = 0; w < kWriters; ++w) {
      writers.emplace_back([&, w] {
        const auto log = renumbered(game.events, ids[static_cast<std::size_t>(w)]);
        for (const auto& e : log) {
          store.append(e);
          if (w == 0 && e.seq == 10) {
            // A stale seq from this writer must not disturb the others' batches.
            try {
              store.append(e);
            } catch (const StoreError&) {
              ++refused;
            }
          }
        }
      });
    }
    for (auto& t : writers) t.join();
    CHECK(refused == 1);
    for (GameId id : ids) {
      const auto rec = store.record(id);
      CHECK(rec->status == GameStatus::Over);
      CHECK(state_hash(replay(store.events(id))) == game.final_hash);
    }
  }
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + "-wal");
  std::filesystem::remove(path.string() + "-shm");
}

TEST_CASE("stored self-play games replay to the live hash") {
  EventStore store;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const GameId id = store_selfplay(store, seed);
    const auto rec = store.record(id);
    REQUIRE(rec);
    const auto log = store.events(id);
    CHECK(static_cast<std::int64_t>(log.size()) == rec->event_count);
    CHECK(state_hash(replay(log)) == rec->final_hash);
    CHECK(rec->score == replay(log).turn.score);
    const auto sent = std::count_if(log.begin(), log.end(), [](const GameEvent& e) { return e.is<event::InstructionSent>(); });
    CHECK(rec->instruction_count == sent);
    CHECK(rec->players == std::vector<std::string>{anonymize_player("ann"), anonymize_player("bob")});
    CHECK(rec->players[0].find("ann") == std::string::npos);
  }
  CHECK(store.game_count() == 3);
  CHECK(store.records(2, 1).size() == 2);
  CHECK(store.records(2, 1)[0].game_id == 2);
}

TEST_CASE("stats examples") {
  SUBCASE("no games") {
    EventStore store;
    const Stats s = store.stats();
    CHECK(s.game_count == 0);
    CHECK_FALSE(s.mean_score);
    CHECK_FALSE(s.median_score);
  }
  SUBCASE("1 2 3") {
    EventStore store;
    for (int v : {1, 2, 3}) store_scored(store, v);
    const Stats s = store.stats();
    CHECK(s.game_count == 3);
    CHECK(*s.mean_score == doctest::Approx(2.0));
    CHECK(*s.median_score == doctest::Approx(2.0));
  }
  SUBCASE("0 0 10") {
    EventStore store;
    for (int v : {0, 0, 10}) store_scored(store, v);
    const Stats s = store.stats();
    CHECK(*s.mean_score == doctest::Approx(3.33).epsilon(0.01));
    CHECK(*s.median_score == doctest::Approx(0.0));
    CHECK(s.score_histogram == std::map<int, std::int64_t>{{0, 2}, {10, 1}});
  }
  SUBCASE("live and abandoned games are not counted") {
    EventStore store;
    store_scored(store, 6);
    store.create_game("main", {"x", "y"});
    const Stats s = store.stats();
    CHECK(s.game_count == 1);
    CHECK(*s.median_score == 6);
  }
}

TEST_CASE("recent scores are newest first and per player") {
  EventStore store;
  for (int v : {1, 5, 7}) store_scored(store, v, "ann");
  store_scored(store, 9, "cat");
  CHECK(store.recent_scores("ann", 10) == std::vector<int>{7, 5, 1});
  CHECK(store.recent_scores("ann", 2) == std::vector<int>{7, 5});
  CHECK(store.recent_scores("bob", 10).size() == 4);
  CHECK(store.recent_scores("nobody", 10).empty());
}

TEST_CASE("archive round trip") {
  EventStore store;
  for (std::uint64_t seed = 0; seed < 3; ++seed) store_selfplay(store, seed);
  store_scored(store, 0);
  const auto files = export_archive(store);
  CHECK(files.count("records.index") == 1);
  CHECK(files.count("game_1.events") == 1);

  EventStore copy;
  import_archive(copy, files);
  CHECK(copy.stats() == store.stats());
  CHECK(copy.records(100, 0) == store.records(100, 0));
  CHECK(copy.events(2) == store.events(2));
  CHECK_THROWS_AS(import_archive(copy, files), StoreError);

  const auto dir = std::filesystem::temp_directory_path() / "cb2_archive_test";
  std::filesystem::remove_all(dir);
  export_archive_dir(store, dir);
  EventStore from_dir;
  import_archive_dir(from_dir, dir);
  CHECK(from_dir.stats() == store.stats());
  std::filesystem::remove_all(dir);
}

TEST_CASE("file-backed store survives reopening") {
  const auto path = std::filesystem::temp_directory_path() / "cb2_store_test.sqlite";
  std::filesystem::remove(path);
  GameId id = 0;
  {
    EventStore store(path.string());
    id = store_selfplay(store, 4);
  }
  EventStore reopened(path.string());
  CHECK(reopened.record(id)->status == GameStatus::Over);
  CHECK(state_hash(replay(reopened.events(id))) == reopened.record(id)->final_hash);
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + "-wal");
  std::filesystem::remove(path.string() + "-shm");
}

TEST_CASE("portal endpoints") {
  EventStore store;
  std::vector<int> scores;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const GameId id = store_selfplay(store, seed);
    scores.push_back(store.record(id)->score);
  }

  const auto games = handle_portal(store, "GET", "/data/games");
  REQUIRE(games.status == 200);
  const json list = json::parse(games.body);
  CHECK(list.at("games").size() == 3);
  CHECK(list.at("total") == 3);
  CHECK(json::parse(handle_portal(store, "GET", "/data/games?limit=1&offset=2").body).at("games").at(0).at("game_id") == 3);
  CHECK(json::parse(handle_portal(store, "GET", "/data/games?offset=9").body).at("games").empty());

  for (const char* bad : {"/data/games?limit=abc", "/data/games?limit=-1", "/data/games?offset=1.5",
                          "/data/games?limit=0", "/data/games/xyz"}) {
    CHECK_MESSAGE(handle_portal(store, "GET", bad).status == 400, bad);
  }
  CHECK(handle_portal(store, "GET", "/data/games/99").status == 404);
  CHECK(handle_portal(store, "GET", "/data/games/99/events").status == 404);
  CHECK(handle_portal(store, "GET", "/data/nothing").status == 404);
  CHECK(handle_portal(store, "POST", "/data/stats").status == 405);

  for (GameId id = 1; id <= 3; ++id) {
    const json rec = json::parse(handle_portal(store, "GET", "/data/games/" + std::to_string(id)).body);
    CHECK(rec.at("game_id") == id);
    CHECK(rec.at("replay_url") == "/play?replay_game=" + std::to_string(id));
    const json ev = json::parse(handle_portal(store, "GET", "/data/games/" + std::to_string(id) + "/events").body);
    std::vector<GameEvent> log;
    for (const auto& e : ev.at("events")) log.push_back(e.get<GameEvent>());
    CHECK(replay(log).turn.score == rec.at("score"));
  }

  const json stats = json::parse(handle_portal(store, "GET", "/data/stats").body);
  CHECK(stats.at("game_count") == 3);
  CHECK(stats.at("mean_score").get<double>() == doctest::Approx(mean_of(scores)));

  const auto archive = handle_portal(store, "GET", "/data/archive");
  CHECK(archive.status == 200);
  EventStore copy;
  import_archive(copy, json::parse(archive.body).at("files").get<std::map<std::string, std::string>>());
  CHECK(copy.stats() == store.stats());
}
