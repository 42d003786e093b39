#include <doctest.h>

#include <future>
#include <unistd.h>

#include "cb2/client.hpp"
#include "cb2/local_game.hpp"
#include "cb2/replay.hpp"
#include "cb2/scenario.hpp"
#include "cb2/server.hpp"
#include "support/net_helpers.hpp"
#include "unit/fixtures.hpp"

using namespace cb2;
using namespace std::chrono_literals;

namespace {

std::filesystem::path write_scenario() {
  const auto dir = support::scratch_dir("scenario");
  const GameMap m = generate_map(fixture::small_gen(6));
  std::ofstream(dir / "start.json") << export_scenario(new_game(m, GameConfig{}, 9));
  return dir / "start.json";
}

ServerConfig test_config() {
  ServerConfig c;
  c.port = 0;
  c.data_dir = ":memory:";
  c.threads = 3;
  c.map_pool_size = 2;
  c.tutorial_prompts = {"Use the arrow keys to move.", "Press enter to send."};
  c.lobbies = {
      {"main", PairingPolicy::HumanHuman, RoomType::Game, {}},
      {"bots", PairingPolicy::BotBot, RoomType::Game, {}},
      {"hb", PairingPolicy::HumanBot, RoomType::Game, {}},
      {"tutorial", PairingPolicy::HumanBot, RoomType::Tutorial, {}},
      {"lab", PairingPolicy::BotBot, RoomType::Scenario, write_scenario()},
  };
  return c;
}

ConnectOptions opts(int port, const std::string& lobby, const std::string& name, bool bot = true) {
  ConnectOptions o;
  o.port = port;
  o.lobby_id = lobby;
  o.display_name = name;
  o.is_bot = bot;
  o.connect_timeout = 2s;
  o.pair_timeout = 10s;
  o.step_timeout = 20s;
  return o;
}

std::pair<std::unique_ptr<NetSession>, std::unique_ptr<NetSession>> pair_up(const ConnectOptions& a,
                                                                             const ConnectOptions& b) {
  auto fa = std::async(std::launch::async, [&] { return connect(a); });
  auto sb = connect(b);
  auto sa = fa.get();
  if (sa->role() == Role::Leader) return {std::move(sa), std::move(sb)};
  return {std::move(sb), std::move(sa)};
}

}  // namespace

TEST_CASE("server http endpoints") {
  Server server(test_config(), [] { return Timestamp{0}; });
  server.start();
  REQUIRE(server.port() > 0);
  CHECK(support::http_request(server.port(), "/healthz").status == 200);
  CHECK(support::http_request(server.port(), "/data/stats").status == 200);
  CHECK(support::http_request(server.port(), "/data/games/5").status == 404);
  CHECK(support::http_request(server.port(), "/data/games?limit=x").status == 400);
  CHECK(support::http_request(server.port(), "/nowhere").status == 404);
  CHECK(support::http_request(server.port(), "/play/../secret").status == 400);
  server.stop();
}

TEST_CASE("static client assets under /play") {
  ServerConfig c = test_config();
  c.static_dir = support::scratch_dir("static");
  std::ofstream(c.static_dir / "index.html") << "<html>cb2</html>";
  std::ofstream(c.static_dir / "app.js") << "console.log(1)";
  Server server(c, [] { return Timestamp{0}; });
  server.start();
  const auto index = support::http_request(server.port(), "/play?replay_game=3");
  CHECK(index.status == 200);
  CHECK(index.body == "<html>cb2</html>");
  CHECK(index.content_type.find("text/html") == 0);
  CHECK(support::http_request(server.port(), "/play/app.js").content_type == "text/javascript");
  CHECK(support::http_request(server.port(), "/play/missing.js").status == 404);
}

TEST_CASE("networked bots play a full recorded game") {
  Server server(test_config(), [] { return Timestamp{0}; });
  server.start();
  auto [leader, follower] = pair_up(opts(server.port(), "bots", "b1"), opts(server.port(), "bots", "b2"));
  CHECK(leader->role() == Role::Leader);
  CHECK(follower->role() == Role::Follower);
  CHECK(leader->game_id() == follower->game_id());
  const auto [l, f] = play_bots(*leader, *follower);
  CHECK(l.game_over);
  CHECK(f.game_over);
  CHECK_FALSE(l.abandoned);
  const auto rec = server.store().record(leader->game_id());
  REQUIRE(rec);
  CHECK(rec->status == GameStatus::Over);
  CHECK(rec->score == l.score);
  const auto log = server.store().events(leader->game_id());
  CHECK(state_hash(replay(log)) == rec->final_hash);
  CHECK_THROWS_AS(leader->step(Action::noop()), SessionError);

  // The same game in the local engine produces the same log.
  const auto* start = log.front().as<event::GameStart>();
  const auto local = play_local(start->map, start->config, start->seed);
  REQUIRE(local.events.size() == log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    GameEvent a = log[i];
    GameEvent b = local.events[i];
    a.game_id = b.game_id = 0;
    a.wall_time = b.wall_time = 0;
    REQUIRE(to_canonical(a) == to_canonical(b));
  }
}

TEST_CASE("client step semantics") {
  Server server(test_config(), [] { return Timestamp{0}; });
  server.start();
  auto [leader, follower] = pair_up(opts(server.port(), "bots", "x1"), opts(server.port(), "bots", "x2"));

  auto pending = std::async(std::launch::async, [&f = follower] { return f->step(Action::noop()); });
  CHECK(pending.wait_for(100ms) == std::future_status::timeout);
  const StepResult l0 = leader->initial();
  CHECK(l0.turn.active_role == Role::Leader);
  REQUIRE_FALSE(leader->step(Action::send_instruction("forward 1")).rejection);
  auto leader_wait = std::async(std::launch::async, [&l = leader] { return l->step(Action::end_turn()); });
  const StepResult f1 = pending.get();
  CHECK(f1.turn.active_role == Role::Follower);
  CHECK(f1.observation.role == Role::Follower);

  const StepResult bad = follower->step(Action::send_instruction("nope"));
  REQUIRE(bad.rejection);
  CHECK(*bad.rejection == "wrong-actor");

  follower->leave();
  const StepResult end = leader_wait.get();
  CHECK(end.game_over);
  CHECK(end.abandoned);
  CHECK(server.store().record(leader->game_id())->status == GameStatus::Abandoned);
}

TEST_CASE("lobby refusals and unreachable servers") {
  Server server(test_config(), [] { return Timestamp{0}; });
  server.start();
  auto human = opts(server.port(), "main", "h1", false);
  human.record = false;
  try {
    connect(human);
    FAIL("expected JoinRejected");
  } catch (const JoinRejected& e) {
    CHECK(e.reason() == "recording-required");
  }
  CHECK_THROWS_AS(connect(opts(server.port(), "main", "bot1", true)), JoinRejected);
  CHECK_THROWS_AS(connect(opts(server.port(), "nowhere", "h2", false)), JoinRejected);
  const int port = server.port();
  server.stop();

  auto down = opts(port, "main", "late", false);
  down.connect_timeout = 300ms;
  const auto t0 = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(connect(down), ConnectTimeout);
  CHECK(std::chrono::steady_clock::now() - t0 < 3s);
}

TEST_CASE("unrecorded bot games leave no trace") {
  Server server(test_config(), [] { return Timestamp{0}; });
  server.start();
  auto a = opts(server.port(), "bots", "q1");
  auto b = opts(server.port(), "bots", "q2");
  a.record = b.record = false;
  auto [leader, follower] = pair_up(a, b);
  CHECK(leader->game_id() < 0);
  play_bots(*leader, *follower);
  CHECK(server.store().game_count() == 0);
}

TEST_CASE("missed heartbeats drop the connection") {
  ServerConfig c = test_config();
  c.ping_interval_ms = 40;
  Server server(c, [] { return Timestamp{0}; });
  server.start();
  support::RawSocket silent(server.port(), "/ws/main");
  silent.send(encode(WireMessage{"1.0", 1, msg::JoinLobby{"main", "silent", {Role::Leader}, false, true}}));
  auto o = opts(server.port(), "main", "awake", false);
  o.qualifications = {Role::Follower};
  auto follower = connect(o);
  const StepResult r = follower->initial();
  CHECK(r.game_over);
  CHECK(r.abandoned);
}

TEST_CASE("human lobbies put the human in the lead; tutorials prompt") {
  Server server(test_config(), [] { return Timestamp{0}; });
  server.start();
  auto human = opts(server.port(), "tutorial", "student", false);
  human.qualifications = {Role::Follower};
  auto [leader, bot] = pair_up(human, opts(server.port(), "tutorial", "helper"));
  CHECK(leader->role() == Role::Leader);
  leader->initial();
  REQUIRE_FALSE(leader->step(Action::turn_left()).rejection);
  REQUIRE(leader->prompts().size() == 2);
  CHECK(leader->prompts()[0].text == "Use the arrow keys to move.");
  CHECK(leader->prompts()[1].index == 1);
  CHECK(server.store().record(leader->game_id())->room_type == "tutorial");
}

TEST_CASE("scenario editor over the network") {
  Server server(test_config(), [] { return Timestamp{0}; });
  server.start();
  auto [leader, follower] = pair_up(opts(server.port(), "lab", "s1"), opts(server.port(), "lab", "s2"));
  const StepResult first = leader->initial();
  auto editor = attach_editor("127.0.0.1", server.port(), "lab", leader->game_id());
  const auto start = editor->next_event(2s);
  REQUIRE(start);
  REQUIRE(start->as<event::GameStart>());
  REQUIRE(start->as<event::GameStart>()->initial_state);

  StateEdit drown;
  drown.tiles = std::vector<ObservedTile>{{first.observation.other_pose->cell, Tile{Terrain::Water, 0}}};
  CHECK(editor->push(drown));

  Pose moved = first.observation.own_pose;
  moved.heading = Heading((moved.heading.value() + 3) % 6);
  StateEdit turn;
  turn.leader_pose = moved;
  CHECK_FALSE(editor->push(turn));
  const auto fed = editor->next_event(2s);
  REQUIRE(fed);
  CHECK(fed->is<event::ScenarioEdit>());
  const StepResult after = leader->step(Action::noop());
  CHECK(after.observation.own_pose == moved);

  const auto plain = [&] {
    auto [l2, f2] = pair_up(opts(server.port(), "bots", "p1"), opts(server.port(), "bots", "p2"));
    try {
      attach_editor("127.0.0.1", server.port(), "bots", l2->game_id());
      return std::string("attached");
    } catch (const JoinRejected& e) {
      return e.reason();
    }
  }();
  CHECK(plain == "not-a-scenario-room");
  play_bots(*leader, *follower);
  const auto log = server.store().events(leader->game_id());
  CHECK(state_hash(replay(log)) == server.store().record(leader->game_id())->final_hash);
}
