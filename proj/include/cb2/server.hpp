#pragma once

#include <memory>

#include "cb2/event_store.hpp"
#include "cb2/server_config.hpp"

namespace cb2 {

/// Websocket game server plus the HTTP data portal and static client assets,
/// all on one port. Rooms run on their own strands; the lobby is shared.
class Server {
 public:
  explicit Server(ServerConfig config, Clock clock = system_clock_ms);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts the worker threads. Returns once the port is open.
  void start();
  /// Stops accepting, closes connections and joins the workers. Idempotent.
  void stop();
  /// Blocks until SIGINT or SIGTERM, then stops.
  void run_until_signal();

  int port() const;
  EventStore& store();
  const ServerConfig& config() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace cb2
