#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cb2/protocol.hpp"

namespace cb2 {

enum class PairingPolicy { HumanHuman, HumanBot, BotBot };
enum class RoomType { Game, Tutorial, Replay, Scenario };

std::string_view to_string(PairingPolicy p);
std::string_view to_string(RoomType t);
PairingPolicy parse_pairing_policy(std::string_view s);
RoomType parse_room_type(std::string_view s);

inline constexpr int kRecentScoreWindow = 10;

using ConnId = std::uint64_t;

struct WaitingPlayer {
  ConnId conn = 0;
  std::string display_name;
  bool leader_qualified = false;
  bool is_bot = false;
  bool record = true;
  std::vector<int> recent_scores;  // newest first, at most kRecentScoreWindow
  std::uint64_t arrival = 0;       // lower waited longer

  double mean_recent() const;
};

struct Pairing {
  WaitingPlayer leader;
  WaitingPlayer follower;
  bool record() const { return leader.record || follower.record; }
};

/// Queues of one lobby. Join, leave and pair are linearizable.
class Lobby {
 public:
  Lobby(std::string id, PairingPolicy policy) : id_(std::move(id)), policy_(policy) {}

  const std::string& id() const { return id_; }
  PairingPolicy policy() const { return policy_; }

  /// Returns the 1-based queue position, or the reason the join was refused.
  std::variant<int, std::string> join(ConnId conn, const msg::JoinLobby& request, std::vector<int> recent_scores);

  /// Removes a waiting player; false if it was not queued.
  bool leave(ConnId conn);

  /// Pairs two waiting players if the policy allows it.
  std::optional<Pairing> try_pair();

  std::size_t waiting() const;

 private:
  std::optional<Pairing> pair_by_qualification();
  std::optional<Pairing> pair_human_with_bot();
  bool queued(ConnId conn, const std::string& name) const;

  std::string id_;
  PairingPolicy policy_;
  mutable std::mutex mu_;
  std::uint64_t next_arrival_ = 0;
  std::deque<WaitingPlayer> leader_qualified_;
  std::deque<WaitingPlayer> follower_only_;
  std::deque<WaitingPlayer> bots_;  // human_bot lobbies only
};

/// Orders two leader-qualified players: higher recent mean leads, ties go to
/// whoever waited longer.
Pairing assign_roles(WaitingPlayer a, WaitingPlayer b);

}  // namespace cb2
