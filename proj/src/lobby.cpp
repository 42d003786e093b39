#include "cb2/lobby.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cb2 {

std::string_view to_string(PairingPolicy p) {
  switch (p) {
    case PairingPolicy::HumanHuman: return "human_human";
    case PairingPolicy::HumanBot: return "human_bot";
    case PairingPolicy::BotBot: return "bot_bot";
  }
  return "human_human";
}

std::string_view to_string(RoomType t) {
  switch (t) {
    case RoomType::Game: return "game";
    case RoomType::Tutorial: return "tutorial";
    case RoomType::Replay: return "replay";
    case RoomType::Scenario: return "scenario";
  }
  return "game";
}

PairingPolicy parse_pairing_policy(std::string_view s) {
  for (auto p : {PairingPolicy::HumanHuman, PairingPolicy::HumanBot, PairingPolicy::BotBot}) {
    if (to_string(p) == s) return p;
  }
  throw std::invalid_argument("unknown pairing policy " + std::string(s));
}

RoomType parse_room_type(std::string_view s) {
  for (auto t : {RoomType::Game, RoomType::Tutorial, RoomType::Replay, RoomType::Scenario}) {
    if (to_string(t) == s) return t;
  }
  throw std::invalid_argument("unknown room type " + std::string(s));
}

double WaitingPlayer::mean_recent() const {
  if (recent_scores.empty()) return 0.0;
  return std::accumulate(recent_scores.begin(), recent_scores.end(), 0.0) / static_cast<double>(recent_scores.size());
}

Pairing assign_roles(WaitingPlayer a, WaitingPlayer b) {
  const double ma = a.mean_recent();
  const double mb = b.mean_recent();
  const bool a_leads = ma != mb ? ma > mb : a.arrival < b.arrival;
  if (a_leads) return Pairing{std::move(a), std::move(b)};
  return Pairing{std::move(b), std::move(a)};
}

bool Lobby::queued(ConnId conn, const std::string& name) const {
  for (const auto* q : {&leader_qualified_, &follower_only_, &bots_}) {
    for (const auto& p : *q) {
      if (p.conn == conn || p.display_name == name) return true;
    }
  }
  return false;
}

std::variant<int, std::string> Lobby::join(ConnId conn, const msg::JoinLobby& request, std::vector<int> recent_scores) {
  if (request.lobby_id != id_) return std::string("unknown-lobby");
  if (request.display_name.empty()) return std::string("missing-display-name");
  if (request.is_bot && policy_ == PairingPolicy::HumanHuman) return std::string("bots-not-allowed");
  if (!request.is_bot && policy_ == PairingPolicy::BotBot) return std::string("humans-not-allowed");
  if (!request.record && policy_ != PairingPolicy::BotBot) return std::string("recording-required");

  WaitingPlayer p;
  p.conn = conn;
  p.display_name = request.display_name;
  p.leader_qualified = std::find(request.qualifications.begin(), request.qualifications.end(), Role::Leader) !=
                       request.qualifications.end();
  p.is_bot = request.is_bot;
  p.record = request.record;
  if (recent_scores.size() > static_cast<std::size_t>(kRecentScoreWindow)) recent_scores.resize(kRecentScoreWindow);
  p.recent_scores = std::move(recent_scores);

  std::lock_guard lock(mu_);
  if (queued(conn, p.display_name)) return std::string("duplicate-join");
  p.arrival = next_arrival_++;
  auto& q = policy_ == PairingPolicy::HumanBot && p.is_bot ? bots_
            : p.leader_qualified                           ? leader_qualified_
                                                           : follower_only_;
  q.push_back(std::move(p));
  return static_cast<int>(q.size());
}

bool Lobby::leave(ConnId conn) {
  std::lock_guard lock(mu_);
  for (auto* q : {&leader_qualified_, &follower_only_, &bots_}) {
    const auto it = std::find_if(q->begin(), q->end(), [&](const WaitingPlayer& p) { return p.conn == conn; });
    if (it != q->end()) {
      q->erase(it);
      return true;
    }
  }
  return false;
}

std::size_t Lobby::waiting() const {
  std::lock_guard lock(mu_);
  return leader_qualified_.size() + follower_only_.size() + bots_.size();
}

namespace {

WaitingPlayer pop(std::deque<WaitingPlayer>& q) {
  WaitingPlayer p = std::move(q.front());
  q.pop_front();
  return p;
}

}  // namespace

std::optional<Pairing> Lobby::pair_by_qualification() {
  if (!leader_qualified_.empty() && !follower_only_.empty()) {
    WaitingPlayer leader = pop(leader_qualified_);
    return Pairing{std::move(leader), pop(follower_only_)};
  }
  if (leader_qualified_.size() >= 2) {
    WaitingPlayer a = pop(leader_qualified_);
    return assign_roles(std::move(a), pop(leader_qualified_));
  }
  return std::nullopt;
}

std::optional<Pairing> Lobby::pair_human_with_bot() {
  if (bots_.empty()) return std::nullopt;
  // The human who waited longest leads, whatever queue they sit in.
  std::deque<WaitingPlayer>* from = nullptr;
  if (!leader_qualified_.empty()) from = &leader_qualified_;
  if (!follower_only_.empty() && (!from || follower_only_.front().arrival < from->front().arrival)) {
    from = &follower_only_;
  }
  if (!from) return std::nullopt;
  WaitingPlayer human = pop(*from);
  return Pairing{std::move(human), pop(bots_)};
}

std::optional<Pairing> Lobby::try_pair() {
  std::lock_guard lock(mu_);
  switch (policy_) {
    case PairingPolicy::HumanHuman: return pair_by_qualification();
    case PairingPolicy::HumanBot: return pair_human_with_bot();
    case PairingPolicy::BotBot: return pair_by_qualification();
  }
  return std::nullopt;
}

}  // namespace cb2
