#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cb2/event_store.hpp"

namespace cb2 {

struct HttpReply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
};

/// Read-only data API under /data. `target` is the request target including
/// any query string. Returns 404 for paths it does not serve.
HttpReply handle_portal(const EventStore& store, std::string_view method, std::string_view target);

/// Link that opens the browser replay viewer on a stored game.
std::string replay_url(GameId id);

}  // namespace cb2
