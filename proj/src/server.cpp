#include "cb2/server.hpp"

#include <array>
#include <atomic>
#include <csignal>
#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "cb2/map_pool.hpp"
#include "cb2/portal.hpp"
#include "cb2/room.hpp"
#include "cb2/scenario.hpp"

namespace cb2 {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

class Room;
class WsConnection;

void log_line(const std::string& s) {
  static std::mutex mu;
  std::lock_guard lock(mu);
  std::cerr << "[cb2-server] " << s << "\n";
}

std::string_view mime_type(std::string_view path) {
  const auto dot = path.rfind('.');
  const auto ext = dot == std::string_view::npos ? std::string_view{} : path.substr(dot);
  if (ext == ".html") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".wasm") return "application/wasm";
  return "application/octet-stream";
}

}  // namespace

struct Server::Impl {
  Impl(ServerConfig c, Clock clk);

  ServerConfig config;
  Clock clock;
  std::unique_ptr<EventStore> store;
  MapPool pool;
  std::map<std::string, LobbyDef> defs;
  std::map<std::string, std::unique_ptr<Lobby>> lobbies;
  std::map<std::string, GameState> scenarios;

  std::mutex mu;  // conns, rooms
  std::map<ConnId, std::weak_ptr<WsConnection>> conns;
  std::map<GameId, std::weak_ptr<Room>> rooms;
  std::atomic<ConnId> next_conn{1};
  std::atomic<GameId> next_unrecorded{-1};

  // Declared last so pending handlers die before the state they refer to.
  net::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::vector<std::thread> workers;
  std::atomic<bool> running{false};
  int bound_port = 0;

  void accept();
  void join(const std::shared_ptr<WsConnection>& conn, const msg::JoinLobby& m, std::int64_t seq);
  void attach(const std::shared_ptr<WsConnection>& conn, GameId id, std::int64_t seq);
  void create_room(const LobbyDef& def, const Pairing& p);
  void forget_room(GameId id);
  http::response<http::string_body> handle_http(const http::request<http::string_body>& req);
};

namespace {

enum class ConnState { Fresh, Waiting, Playing, Editing, Done };

class Room : public std::enable_shared_from_this<Room> {
 public:
  Room(Server::Impl& srv, RoomSetup setup)
      : srv_(srv), core_(std::move(setup)), strand_(net::make_strand(srv.ioc)), timer_(strand_) {}

  GameId game_id() const { return core_.game_id(); }

  void set_player(Role r, std::shared_ptr<WsConnection> conn) { endpoints_[index(endpoint_of(r))] = std::move(conn); }

  void start();
  void post_action(Role r, std::int64_t seq, Action a) {
    post([r, seq, a = std::move(a)](Room& self) { return self.core_.on_action(r, seq, a); });
  }
  void post_leave(Role r) {
    post([r](Room& self) { return self.core_.on_leave(r); });
  }
  void post_push(std::int64_t seq, StateEdit edit) {
    post([seq, edit = std::move(edit)](Room& self) { return self.core_.on_push(seq, edit); });
  }
  void post_attach(std::shared_ptr<WsConnection> conn, std::int64_t seq);
  void post_detach() {
    net::post(strand_, [self = shared_from_this()] {
      self->core_.on_editor_detach();
      self->endpoints_[index(Endpoint::Editor)].reset();
    });
  }
  void post_shutdown() {
    net::post(strand_, [self = shared_from_this()] {
      self->timer_.cancel();
      for (auto& e : self->endpoints_) e.reset();
    });
  }

 private:
  static std::size_t index(Endpoint e) { return static_cast<std::size_t>(e); }

  template <class F>
  void post(F f) {
    net::post(strand_, [self = shared_from_this(), f = std::move(f)] {
      try {
        self->deliver(f(*self));
      } catch (const std::exception& e) {
        log_line("game " + std::to_string(self->game_id()) + ": " + e.what());
        self->fail(e.what());
      }
      self->after();
    });
  }

  void deliver(const std::vector<Outbound>& out);
  void fail(const std::string& what);
  void after();
  void arm_timer();

  Server::Impl& srv_;
  RoomCore core_;
  net::strand<net::io_context::executor_type> strand_;
  net::steady_timer timer_;
  std::array<std::shared_ptr<WsConnection>, 3> endpoints_;
  bool closed_ = false;
};

class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(Server::Impl& srv, tcp::socket socket, std::string lobby_id)
      : srv_(srv),
        id_(srv.next_conn++),
        ws_(std::move(socket)),
        ping_timer_(ws_.get_executor()),
        lobby_id_(std::move(lobby_id)) {}

  ConnId id() const { return id_; }
  const std::string& lobby_id() const { return lobby_id_; }

  void run(http::request<http::string_body> req) {
    beast::get_lowest_layer(ws_).expires_never();
    websocket::stream_base::timeout opt{std::chrono::seconds(30), websocket::stream_base::none(), false};
    ws_.set_option(opt);
    ws_.read_message_max(8u << 20);
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return self->closed();
      self->schedule_ping();
      self->read();
    });
  }

  /// Thread-safe; messages go out in call order.
  void send(Payload p) {
    net::post(ws_.get_executor(), [self = shared_from_this(), p = std::move(p)]() mutable {
      if (self->gone_) return;
      self->outq_.push_back(encode(self->seq_.next(std::move(p))));
      if (self->outq_.size() == 1) self->write();
    });
  }

  /// False when the connection already closed.
  bool enter_room(std::shared_ptr<Room> room, std::optional<Role> role) {
    std::lock_guard lock(mu_);
    if (gone_) return false;
    room_ = std::move(room);
    role_ = role;
    state_ = role ? ConnState::Playing : ConnState::Editing;
    return true;
  }

  void mark_waiting() {
    std::lock_guard lock(mu_);
    state_ = ConnState::Waiting;
  }

  void close() {
    net::post(ws_.get_executor(), [self = shared_from_this()] {
      beast::error_code ec;
      beast::get_lowest_layer(self->ws_).socket().shutdown(tcp::socket::shutdown_both, ec);
      beast::get_lowest_layer(self->ws_).close();
    });
  }

 private:
  void read() {
    ws_.async_read(buf_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->closed();
      const std::string text = beast::buffers_to_string(self->buf_.data());
      self->buf_.consume(self->buf_.size());
      self->handle(text);
      self->read();
    });
  }

  void write() {
    ws_.text(true);
    ws_.async_write(net::buffer(outq_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->closed();
      self->outq_.pop_front();
      if (!self->outq_.empty()) self->write();
    });
  }

  void schedule_ping() {
    ping_timer_.expires_after(std::chrono::milliseconds(srv_.config.ping_interval_ms));
    ping_timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->gone_) return;
      if (self->missed_pongs_ >= self->srv_.config.max_missed_pongs) {
        log_line("connection " + std::to_string(self->id_) + " missed heartbeats");
        beast::get_lowest_layer(self->ws_).close();
        return;
      }
      ++self->missed_pongs_;
      self->send(msg::Ping{});
      self->schedule_ping();
    });
  }

  void handle(const std::string& text) {
    auto decoded = decode(text);
    if (auto* err = std::get_if<ProtocolError>(&decoded)) {
      send(msg::Error{std::string(to_string(err->code)), err->detail});
      return;
    }
    const WireMessage& m = std::get<WireMessage>(decoded);
    if (m.seq <= last_in_seq_) {
      send(msg::Error{"bad-seq", "seq must increase"});
      return;
    }
    last_in_seq_ = m.seq;

    std::unique_lock lock(mu_);
    const ConnState state = state_;
    const auto room = room_;
    const auto role = role_;
    lock.unlock();

    if (m.as<msg::Pong>()) {
      missed_pongs_ = 0;
    } else if (const auto* j = m.as<msg::JoinLobby>()) {
      if (state != ConnState::Fresh) {
        send(msg::Rejected{"already-joined", m.seq});
      } else if (j->lobby_id != lobby_id_) {
        send(msg::Rejected{"lobby-mismatch", m.seq});
      } else {
        srv_.join(shared_from_this(), *j, m.seq);
      }
    } else if (const auto* a = m.as<msg::PlayerAction>()) {
      if (state == ConnState::Playing) {
        room->post_action(*role, m.seq, a->action);
      } else {
        send(msg::Rejected{"not-in-game", m.seq});
      }
    } else if (m.as<msg::LeaveGame>()) {
      leave();
    } else if (const auto* at = m.as<msg::ScenarioAttach>()) {
      if (state != ConnState::Fresh) {
        send(msg::ScenarioAck{false, "already-joined", m.seq});
      } else {
        srv_.attach(shared_from_this(), at->game_id, m.seq);
      }
    } else if (const auto* push = m.as<msg::ScenarioPush>()) {
      if (state == ConnState::Editing) {
        room->post_push(m.seq, push->edit);
      } else {
        send(msg::ScenarioAck{false, "not-attached", m.seq});
      }
    } else {
      send(msg::Error{"unexpected-kind", std::string(kind_name(m.payload)) + " is not accepted from clients"});
    }
  }

  void leave() {
    std::unique_lock lock(mu_);
    const ConnState state = state_;
    auto room = std::move(room_);
    const auto role = role_;
    state_ = ConnState::Done;
    lock.unlock();
    if (state == ConnState::Waiting) {
      const auto it = srv_.lobbies.find(lobby_id_);
      if (it != srv_.lobbies.end()) it->second->leave(id_);
    } else if (state == ConnState::Playing && room) {
      room->post_leave(*role);
    } else if (state == ConnState::Editing && room) {
      room->post_detach();
    }
  }

  void closed() {
    if (gone_) return;
    gone_ = true;
    ping_timer_.cancel();
    leave();
    std::lock_guard lock(srv_.mu);
    srv_.conns.erase(id_);
  }

  Server::Impl& srv_;
  ConnId id_;
  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buf_;
  std::deque<std::string> outq_;
  SeqCounter seq_;
  net::steady_timer ping_timer_;
  int missed_pongs_ = 0;
  std::int64_t last_in_seq_ = 0;
  std::atomic<bool> gone_{false};
  std::string lobby_id_;

  std::mutex mu_;
  ConnState state_ = ConnState::Fresh;
  std::shared_ptr<Room> room_;
  std::optional<Role> role_;
};

void Room::start() {
  net::post(strand_, [self = shared_from_this()] {
    for (Role r : {Role::Leader, Role::Follower}) {
      if (auto& c = self->endpoints_[index(endpoint_of(r))]) c->send(msg::Paired{self->game_id(), r});
    }
    try {
      self->deliver(self->core_.start());
      for (Role r : {Role::Leader, Role::Follower}) {
        if (!self->endpoints_[index(endpoint_of(r))]) self->deliver(self->core_.on_leave(r));
      }
    } catch (const std::exception& e) {
      log_line("game " + std::to_string(self->game_id()) + ": " + e.what());
      self->fail(e.what());
    }
    self->after();
  });
}

void Room::post_attach(std::shared_ptr<WsConnection> conn, std::int64_t seq) {
  net::post(strand_, [self = shared_from_this(), conn = std::move(conn), seq] {
    const auto out = self->core_.on_attach(seq);
    const auto* ack = std::get_if<msg::ScenarioAck>(&out.front().payload);
    if (ack && ack->ok) {
      if (conn->enter_room(self, std::nullopt)) {
        self->endpoints_[index(Endpoint::Editor)] = conn;
      } else {
        self->core_.on_editor_detach();
      }
    }
    for (const auto& o : out) conn->send(o.payload);
  });
}

void Room::deliver(const std::vector<Outbound>& out) {
  for (const auto& o : out) {
    if (const auto& c = endpoints_[index(o.to)]) c->send(o.payload);
  }
}

void Room::fail(const std::string& what) {
  for (auto& c : endpoints_) {
    if (c) c->send(msg::Error{"server-error", what});
  }
  closed_ = true;
}

void Room::after() {
  if (closed_ || core_.over()) {
    timer_.cancel();
    for (auto& c : endpoints_) c.reset();
    srv_.forget_room(game_id());
    return;
  }
  arm_timer();
}

void Room::arm_timer() {
  const Timestamp wait = std::max<Timestamp>(core_.state().turn.turn_deadline - srv_.clock(), 0);
  const int turn = core_.state().turn.turn_number;
  timer_.expires_after(std::chrono::milliseconds(wait + 5));
  timer_.async_wait([self = shared_from_this(), turn](beast::error_code ec) {
    if (ec) return;
    try {
      self->deliver(self->core_.on_timer(turn));
    } catch (const std::exception& e) {
      self->fail(e.what());
    }
    self->after();
  });
}

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(Server::Impl& srv, tcp::socket socket) : srv_(srv), stream_(std::move(socket)) {}

  void run() { read(); }

 private:
  void read() {
    parser_.emplace();
    parser_->body_limit(1u << 20);
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buf_, *parser_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->shutdown();
      self->dispatch(self->parser_->release());
    });
  }

  void dispatch(http::request<http::string_body> req) {
    const std::string target(req.target());
    if (websocket::is_upgrade(req)) {
      if (target.rfind("/ws/", 0) == 0) {
        std::string lobby = target.substr(4, target.find('?') == std::string::npos ? std::string::npos
                                                                                     : target.find('?') - 4);
        auto conn = std::make_shared<WsConnection>(srv_, stream_.release_socket(), std::move(lobby));
        {
          std::lock_guard lock(srv_.mu);
          srv_.conns[conn->id()] = conn;
        }
        conn->run(std::move(req));
        return;
      }
    }
    auto res = std::make_shared<http::response<http::string_body>>(srv_.handle_http(req));
    res->keep_alive(req.keep_alive());
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
      if (ec || !res->keep_alive()) return self->shutdown();
      self->read();
    });
  }

  void shutdown() {
    beast::error_code ec;
    stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
  }

  Server::Impl& srv_;
  beast::tcp_stream stream_;
  beast::flat_buffer buf_;
  std::optional<http::request_parser<http::string_body>> parser_;
};

}  // namespace

Server::Impl::Impl(ServerConfig c, Clock clk)
    : config(std::move(c)), clock(std::move(clk)), pool(config.mapgen, config.map_seed), ioc(config.threads) {
  if (config.data_dir == ":memory:") {
    store = std::make_unique<EventStore>(":memory:", EventStore::Options{config.sync_full});
  } else {
    std::filesystem::create_directories(config.data_dir);
    store = std::make_unique<EventStore>((config.data_dir / "games.sqlite").string(),
                                         EventStore::Options{config.sync_full});
  }
  for (const auto& def : config.lobbies) {
    if (defs.count(def.id)) throw ConfigError("duplicate lobby " + def.id);
    defs[def.id] = def;
    lobbies[def.id] = std::make_unique<Lobby>(def.id, def.policy);
    if (def.scenario) scenarios[def.id] = load_scenario_file(*def.scenario);
  }
}

void Server::Impl::accept() {
  acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (ec) {
      if (running) accept();
      return;
    }
    beast::error_code ignored;
    socket.set_option(tcp::no_delay(true), ignored);
    std::make_shared<HttpSession>(*this, std::move(socket))->run();
    accept();
  });
}

void Server::Impl::join(const std::shared_ptr<WsConnection>& conn, const msg::JoinLobby& m, std::int64_t seq) {
  const auto it = lobbies.find(conn->lobby_id());
  if (it == lobbies.end()) {
    conn->send(msg::Rejected{"unknown-lobby", seq});
    return;
  }
  std::vector<int> recent;
  try {
    recent = store->recent_scores(m.display_name, kRecentScoreWindow);
  } catch (const std::exception& e) {
    log_line(std::string("recent scores: ") + e.what());
  }
  const auto placed = it->second->join(conn->id(), m, std::move(recent));
  if (const auto* reason = std::get_if<std::string>(&placed)) {
    conn->send(msg::Rejected{*reason, seq});
    return;
  }
  conn->mark_waiting();
  conn->send(msg::Joined{std::get<int>(placed)});
  while (auto p = it->second->try_pair()) {
    try {
      create_room(defs.at(it->first), *p);
    } catch (const std::exception& e) {
      log_line(std::string("room creation failed: ") + e.what());
    }
  }
}

void Server::Impl::create_room(const LobbyDef& def, const Pairing& p) {
  std::shared_ptr<WsConnection> leader;
  std::shared_ptr<WsConnection> follower;
  {
    std::lock_guard lock(mu);
    if (auto it = conns.find(p.leader.conn); it != conns.end()) leader = it->second.lock();
    if (auto it = conns.find(p.follower.conn); it != conns.end()) follower = it->second.lock();
  }
  RoomSetup setup;
  setup.type = def.room_type;
  setup.clock = clock;
  if (def.room_type == RoomType::Scenario) {
    setup.initial = scenarios.at(def.id);
    setup.seed = setup.initial.rng.seed();
  } else {
    const GameMap map = pool.acquire();
    setup.seed = map.seed;
    setup.initial = new_game(map, config.game, map.seed, clock());
  }
  if (def.room_type == RoomType::Tutorial) setup.tutorial_prompts = config.tutorial_prompts;
  if (p.record()) {
    setup.store = store.get();
    setup.game_id = store->create_game(def.id, {p.leader.display_name, p.follower.display_name},
                                       std::string(to_string(def.room_type)));
  } else {
    setup.game_id = next_unrecorded--;
  }
  auto room = std::make_shared<Room>(*this, std::move(setup));
  {
    std::lock_guard lock(mu);
    rooms[room->game_id()] = room;
  }
  if (leader) room->set_player(Role::Leader, leader);
  if (follower) room->set_player(Role::Follower, follower);
  room->start();
  // Entered after start so that a leave is always handled by a started room.
  if (leader && !leader->enter_room(room, Role::Leader)) room->post_leave(Role::Leader);
  if (follower && !follower->enter_room(room, Role::Follower)) room->post_leave(Role::Follower);
}

void Server::Impl::attach(const std::shared_ptr<WsConnection>& conn, GameId id, std::int64_t seq) {
  std::shared_ptr<Room> room;
  {
    std::lock_guard lock(mu);
    if (auto it = rooms.find(id); it != rooms.end()) room = it->second.lock();
  }
  if (!room) {
    conn->send(msg::ScenarioAck{false, "unknown-game", seq});
    return;
  }
  room->post_attach(conn, seq);
}

void Server::Impl::forget_room(GameId id) {
  std::lock_guard lock(mu);
  rooms.erase(id);
}

http::response<http::string_body> Server::Impl::handle_http(const http::request<http::string_body>& req) {
  const std::string target(req.target());
  const std::string path = target.substr(0, target.find('?'));
  http::response<http::string_body> res{http::status::ok, req.version()};
  res.set(http::field::server, "cb2");
  const auto plain = [&](http::status s, std::string body) {
    res.result(s);
    res.set(http::field::content_type, "text/plain; charset=utf-8");
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  };

  if (path == "/healthz") return plain(http::status::ok, "ok\n");
  if (path.rfind("/data/", 0) == 0 || path == "/data") {
    const HttpReply r = handle_portal(*store, std::string(req.method_string()), target);
    res.result(static_cast<http::status>(r.status));
    res.set(http::field::content_type, r.content_type);
    for (const auto& [k, v] : r.headers) res.set(k, v);
    res.body() = r.body;
    res.prepare_payload();
    return res;
  }
  if (path == "/play" || path.rfind("/play/", 0) == 0) {
    if (req.method() != http::verb::get && req.method() != http::verb::head) {
      return plain(http::status::method_not_allowed, "method not allowed\n");
    }
    std::string rel = path.size() <= 6 ? "index.html" : path.substr(6);
    if (rel.find("..") != std::string::npos || rel.find('\\') != std::string::npos) {
      return plain(http::status::bad_request, "bad path\n");
    }
    if (config.static_dir.empty()) return plain(http::status::not_found, "browser client not installed\n");
    const auto file = config.static_dir / rel;
    std::ifstream in(file, std::ios::binary);
    if (!in) return plain(http::status::not_found, "not found\n");
    std::ostringstream ss;
    ss << in.rdbuf();
    res.set(http::field::content_type, std::string(mime_type(rel)));
    res.body() = ss.str();
    res.prepare_payload();
    return res;
  }
  if (path == "/") {
    res.result(http::status::found);
    res.set(http::field::location, "/play");
    res.prepare_payload();
    return res;
  }
  return plain(http::status::not_found, "not found\n");
}

Server::Server(ServerConfig config, Clock clock) : impl_(std::make_unique<Impl>(std::move(config), std::move(clock))) {}

Server::~Server() { stop(); }

void Server::start() {
  auto& s = *impl_;
  if (s.running.exchange(true)) return;
  const auto addr = net::ip::make_address(s.config.host);
  const tcp::endpoint ep{addr, static_cast<unsigned short>(s.config.port)};
  s.acceptor.open(ep.protocol());
  s.acceptor.set_option(net::socket_base::reuse_address(true));
  s.acceptor.bind(ep);
  s.acceptor.listen(net::socket_base::max_listen_connections);
  s.bound_port = s.acceptor.local_endpoint().port();
  s.pool.start_background(static_cast<std::size_t>(std::max(s.config.map_pool_size, 0)));
  s.accept();
  for (int i = 0; i < s.config.threads; ++i) {
    s.workers.emplace_back([&s] {
      for (;;) {
        try {
          s.ioc.run();
          break;
        } catch (const std::exception& e) {
          log_line(std::string("worker: ") + e.what());
        }
      }
    });
  }
}

void Server::stop() {
  auto& s = *impl_;
  if (!s.running.exchange(false)) return;
  net::post(s.ioc, [&s] {
    beast::error_code ec;
    s.acceptor.close(ec);
  });
  std::vector<std::shared_ptr<WsConnection>> open;
  std::vector<std::shared_ptr<Room>> live;
  {
    std::lock_guard lock(s.mu);
    for (auto& [_, w] : s.conns) {
      if (auto c = w.lock()) open.push_back(std::move(c));
    }
    for (auto& [_, w] : s.rooms) {
      if (auto r = w.lock()) live.push_back(std::move(r));
    }
  }
  for (auto& c : open) c->close();
  for (auto& r : live) r->post_shutdown();
  s.pool.stop_background();
  // Let the close handlers run before the loop is torn down.
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  s.ioc.stop();
  for (auto& t : s.workers) t.join();
  s.workers.clear();
}

void Server::run_until_signal() {
  net::io_context sig_ctx;
  net::signal_set signals(sig_ctx, SIGINT, SIGTERM);
  signals.async_wait([](beast::error_code, int) {});
  sig_ctx.run();
  stop();
}

int Server::port() const { return impl_->bound_port; }
EventStore& Server::store() { return *impl_->store; }
const ServerConfig& Server::config() const { return impl_->config; }

}  // namespace cb2
