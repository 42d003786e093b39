#include "cb2/client.hpp"

#include <deque>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace cb2 {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;
using SteadyTime = std::chrono::steady_clock::time_point;

namespace {

enum class ReadStatus { Message, Timeout, Closed };

// One websocket connection driven synchronously from the calling thread.
class Channel {
 public:
  void open(const std::string& host, int port, const std::string& path, std::chrono::milliseconds timeout) {
    const SteadyTime deadline = std::chrono::steady_clock::now() + timeout;
    const std::string where = host + ":" + std::to_string(port);
    for (;;) {
      ws_.emplace(ioc_);
      beast::error_code ec;
      tcp::resolver resolver(ioc_);
      const auto endpoints = resolver.resolve(host, std::to_string(port), ec);
      if (!ec) {
        auto& stream = beast::get_lowest_layer(*ws_);
        stream.expires_at(deadline);
        run([&](auto done) { stream.async_connect(endpoints, [&ec, done](beast::error_code e, const auto&) {
                               ec = e;
                               done();
                             }); });
        if (!ec) {
          stream.socket().set_option(tcp::no_delay(true), ec);
          run([&](auto done) { ws_->async_handshake(host, path, [&ec, done](beast::error_code e) {
                                 ec = e;
                                 done();
                               }); });
        }
        if (!ec) {
          stream.expires_never();
          ws_->read_message_max(8u << 20);
          return;
        }
      }
      if (std::chrono::steady_clock::now() + std::chrono::milliseconds(50) >= deadline) {
        throw ConnectTimeout("could not reach " + where + " within " + std::to_string(timeout.count()) +
                             " ms (" + ec.message() + ")");
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  }

  void send(Payload p) {
    if (broken_) throw SessionError("connection closed");
    const std::string text = encode(seq_.next(std::move(p)));
    beast::error_code ec;
    ws_->text(true);
    ws_->write(net::buffer(text), ec);
    if (ec) broken_ = true;
  }

  std::int64_t last_seq() const { return seq_.last(); }

  /// Reads the next message, answering heartbeats on the way.
  ReadStatus read(SteadyTime deadline, WireMessage& out) {
    for (;;) {
      if (broken_) return ReadStatus::Closed;
      bool done = false;
      beast::error_code ec;
      ws_->async_read(buf_, [&](beast::error_code e, std::size_t) {
        ec = e;
        done = true;
      });
      ioc_.restart();
      ioc_.run_until(deadline);
      if (!done) {
        beast::get_lowest_layer(*ws_).cancel();
        ioc_.restart();
        ioc_.run();
        broken_ = true;
        return ReadStatus::Timeout;
      }
      if (ec) {
        broken_ = true;
        return ReadStatus::Closed;
      }
      const std::string text = beast::buffers_to_string(buf_.data());
      buf_.consume(buf_.size());
      auto decoded = decode(text);
      if (auto* err = std::get_if<ProtocolError>(&decoded)) {
        throw SessionError("undecodable server message: " + err->detail);
      }
      out = std::move(std::get<WireMessage>(decoded));
      if (out.as<msg::Ping>()) {
        send(msg::Pong{});
        continue;
      }
      return ReadStatus::Message;
    }
  }

  void close() {
    if (!ws_ || broken_) return;
    broken_ = true;
    beast::error_code ec;
    beast::get_lowest_layer(*ws_).expires_after(std::chrono::seconds(1));
    run([&](auto done) { ws_->async_close(websocket::close_code::normal, [&ec, done](beast::error_code e) {
                           ec = e;
                           done();
                         }); });
    beast::get_lowest_layer(*ws_).close();
  }

 private:
  template <class Start>
  void run(Start start) {
    bool finished = false;
    start([&finished] { finished = true; });
    ioc_.restart();
    while (!finished && ioc_.run_one() > 0) {
    }
  }

  net::io_context ioc_;
  std::optional<websocket::stream<beast::tcp_stream>> ws_;
  beast::flat_buffer buf_;
  SeqCounter seq_;
  bool broken_ = false;
};

SteadyTime after(std::chrono::milliseconds ms) { return std::chrono::steady_clock::now() + ms; }

}  // namespace

struct NetSession::Impl {
  Channel channel;
  ConnectOptions options;
  Role role = Role::Leader;
  GameId game_id = 0;
  Observation latest;
  bool ended = false;
  bool at_decision = false;
  std::vector<msg::TutorialPrompt> prompts;

  StepResult result() {
    StepResult r = make_step_result(latest);
    ended = r.game_over;
    at_decision = true;
    return r;
  }

  StepResult wait_decision(std::int64_t reply_seq) {
    bool replied = reply_seq == 0;
    const SteadyTime deadline = after(options.step_timeout);
    WireMessage m;
    for (;;) {
      switch (channel.read(deadline, m)) {
        case ReadStatus::Timeout:
          throw SessionError("no decision point within " + std::to_string(options.step_timeout.count()) + " ms");
        case ReadStatus::Closed: {
          // A dropped connection ends the game for this player.
          if (!latest.game_over) latest.abandoned = true;
          latest.game_over = true;
          return result();
        }
        case ReadStatus::Message:
          break;
      }
      if (const auto* sync = m.as<msg::StateSync>()) {
        latest = sync->observation;
        if (sync->in_reply_to == reply_seq) replied = true;
        if (replied && (latest.game_over || latest.turn.active_role == role)) return result();
      } else if (const auto* rej = m.as<msg::Rejected>()) {
        if (rej->in_reply_to == reply_seq && reply_seq != 0) {
          StepResult r = result();
          r.rejection = rej->reason;
          return r;
        }
      } else if (const auto* p = m.as<msg::TutorialPrompt>()) {
        prompts.push_back(*p);
      } else if (const auto* err = m.as<msg::Error>()) {
        throw SessionError("server error " + err->code + ": " + err->message);
      }
    }
  }
};

NetSession::NetSession(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
NetSession::~NetSession() {
  try {
    impl_->channel.close();
  } catch (...) {
  }
}

Role NetSession::role() const { return impl_->role; }
GameId NetSession::game_id() const { return impl_->game_id; }
const std::vector<msg::TutorialPrompt>& NetSession::prompts() const { return impl_->prompts; }

StepResult NetSession::initial() {
  if (impl_->ended || impl_->at_decision) return make_step_result(impl_->latest);
  return impl_->wait_decision(0);
}

StepResult NetSession::step(const Action& action) {
  if (impl_->ended) throw SessionError("step after game over");
  impl_->at_decision = false;
  impl_->channel.send(msg::PlayerAction{action});
  return impl_->wait_decision(impl_->channel.last_seq());
}

void NetSession::leave() {
  if (!impl_->ended) {
    try {
      impl_->channel.send(msg::LeaveGame{});
    } catch (const SessionError&) {
    }
  }
  impl_->ended = true;
  impl_->channel.close();
}

std::unique_ptr<NetSession> connect(const ConnectOptions& options) {
  auto impl = std::make_unique<NetSession::Impl>();
  impl->options = options;
  impl->channel.open(options.host, options.port, "/ws/" + options.lobby_id, options.connect_timeout);
  impl->channel.send(msg::JoinLobby{options.lobby_id, options.display_name, options.qualifications, options.is_bot,
                                    options.record});
  const SteadyTime deadline = after(options.pair_timeout);
  WireMessage m;
  for (;;) {
    switch (impl->channel.read(deadline, m)) {
      case ReadStatus::Timeout:
        throw ConnectTimeout("not paired within " + std::to_string(options.pair_timeout.count()) + " ms");
      case ReadStatus::Closed:
        throw SessionError("server closed the connection before pairing");
      case ReadStatus::Message:
        break;
    }
    if (const auto* rej = m.as<msg::Rejected>()) throw JoinRejected(rej->reason);
    if (const auto* err = m.as<msg::Error>()) throw SessionError("server error " + err->code + ": " + err->message);
    if (const auto* p = m.as<msg::Paired>()) {
      impl->role = p->role;
      impl->game_id = p->game_id;
      return std::make_unique<NetSession>(std::move(impl));
    }
  }
}

struct EditorSession::Impl {
  Channel channel;
  std::deque<GameEvent> events;

  // Reads one message, queuing events; false on timeout or close.
  bool pump(SteadyTime deadline, WireMessage& m) {
    if (channel.read(deadline, m) != ReadStatus::Message) return false;
    if (const auto* feed = m.as<msg::ScenarioEventFeed>()) events.push_back(feed->event);
    return true;
  }
};

EditorSession::EditorSession(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
EditorSession::~EditorSession() {
  try {
    impl_->channel.close();
  } catch (...) {
  }
}

std::optional<GameEvent> EditorSession::next_event(std::chrono::milliseconds timeout) {
  const SteadyTime deadline = after(timeout);
  WireMessage m;
  while (impl_->events.empty()) {
    if (!impl_->pump(deadline, m)) return std::nullopt;
  }
  GameEvent e = std::move(impl_->events.front());
  impl_->events.pop_front();
  return e;
}

std::optional<std::string> EditorSession::push(const StateEdit& edit, std::chrono::milliseconds timeout) {
  impl_->channel.send(msg::ScenarioPush{edit});
  const std::int64_t seq = impl_->channel.last_seq();
  const SteadyTime deadline = after(timeout);
  WireMessage m;
  while (impl_->pump(deadline, m)) {
    if (const auto* ack = m.as<msg::ScenarioAck>(); ack && ack->in_reply_to == seq) {
      return ack->ok ? std::nullopt : std::optional<std::string>(ack->reason);
    }
  }
  throw SessionError("no acknowledgement for the edit");
}

std::unique_ptr<EditorSession> attach_editor(const std::string& host, int port, const std::string& lobby_id,
                                             GameId game_id, std::chrono::milliseconds timeout) {
  auto impl = std::make_unique<EditorSession::Impl>();
  impl->channel.open(host, port, "/ws/" + lobby_id, timeout);
  impl->channel.send(msg::ScenarioAttach{game_id});
  const std::int64_t seq = impl->channel.last_seq();
  const SteadyTime deadline = after(timeout);
  WireMessage m;
  while (impl->pump(deadline, m)) {
    if (const auto* ack = m.as<msg::ScenarioAck>(); ack && ack->in_reply_to == seq) {
      if (!ack->ok) throw JoinRejected(ack->reason);
      return std::make_unique<EditorSession>(std::move(impl));
    }
  }
  throw ConnectTimeout("no answer to the attach request");
}

}  // namespace cb2
