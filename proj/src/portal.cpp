#include "cb2/portal.hpp"

#include <charconv>
#include <map>
#include <optional>

namespace cb2 {

namespace {

constexpr std::int64_t kDefaultLimit = 50;
constexpr std::int64_t kMaxLimit = 1000;

HttpReply reply(int status, const json& body) { return HttpReply{status, "application/json", canonical(body), {}}; }

HttpReply error(int status, std::string message) { return reply(status, json{{"error", std::move(message)}}); }

std::optional<std::int64_t> parse_nonneg(std::string_view s) {
  std::int64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || v < 0) return std::nullopt;
  return v;
}

std::map<std::string, std::string, std::less<>> parse_query(std::string_view q) {
  std::map<std::string, std::string, std::less<>> out;
  while (!q.empty()) {
    const auto amp = q.find('&');
    const auto part = q.substr(0, amp);
    const auto eq = part.find('=');
    if (!part.empty()) {
      out[std::string(part.substr(0, eq))] = eq == std::string_view::npos ? "" : std::string(part.substr(eq + 1));
    }
    if (amp == std::string_view::npos) break;
    q.remove_prefix(amp + 1);
  }
  return out;
}

json record_json(const GameRecord& r) {
  json j = r;
  j["replay_url"] = replay_url(r.game_id);
  return j;
}

HttpReply list_games(const EventStore& store, std::string_view query) {
  const auto params = parse_query(query);
  std::int64_t limit = kDefaultLimit;
  std::int64_t offset = 0;
  if (auto it = params.find("limit"); it != params.end()) {
    const auto v = parse_nonneg(it->second);
    if (!v || *v == 0 || *v > kMaxLimit) return error(400, "limit must be an integer in 1.." + std::to_string(kMaxLimit));
    limit = *v;
  }
  if (auto it = params.find("offset"); it != params.end()) {
    const auto v = parse_nonneg(it->second);
    if (!v) return error(400, "offset must be a non-negative integer");
    offset = *v;
  }
  json games = json::array();
  for (const auto& r : store.records(limit, offset)) games.push_back(record_json(r));
  return reply(200, json{{"games", games}, {"limit", limit}, {"offset", offset}, {"total", store.game_count()}});
}

}  // namespace

std::string replay_url(GameId id) { return "/play?replay_game=" + std::to_string(id); }

HttpReply handle_portal(const EventStore& store, std::string_view method, std::string_view target) {
  const auto qpos = target.find('?');
  std::string_view path = target.substr(0, qpos);
  const std::string_view query = qpos == std::string_view::npos ? std::string_view{} : target.substr(qpos + 1);
  while (path.size() > 1 && path.back() == '/') path.remove_suffix(1);

  if (path != "/data/games" && path != "/data/stats" && path != "/data/archive" && !path.starts_with("/data/games/")) {
    return error(404, "not found");
  }
  if (method != "GET") {
    HttpReply r = error(405, "method not allowed");
    r.headers.emplace_back("Allow", "GET");
    return r;
  }
  try {
    if (path == "/data/games") return list_games(store, query);
    if (path == "/data/stats") return reply(200, json(store.stats()));
    if (path == "/data/archive") {
      HttpReply r = reply(200, json{{"files", export_archive(store)}});
      r.headers.emplace_back("Content-Disposition", "attachment; filename=\"cb2-archive.json\"");
      return r;
    }
    std::string_view rest = path.substr(std::string_view("/data/games/").size());
    const auto slash = rest.find('/');
    const std::string_view id_text = rest.substr(0, slash);
    const std::string_view sub = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash);
    const auto id = parse_nonneg(id_text);
    if (!id) return error(400, "game id must be a non-negative integer");
    if (!sub.empty() && sub != "/events") return error(404, "not found");
    const auto rec = store.record(*id);
    if (!rec) return error(404, "unknown game " + std::to_string(*id));
    if (sub.empty()) return reply(200, record_json(*rec));
    json events = json::array();
    for (const auto& e : store.events(*id)) events.push_back(e);
    return reply(200, json{{"game_id", *id}, {"events", events}});
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

}  // namespace cb2
