#pragma once

#include <condition_variable>
#include <exception>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cb2/game_events.hpp"
#include "cb2/serialize.hpp"

struct sqlite3;

namespace cb2 {

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GameStatus { Live, Over, Abandoned };

struct GameRecord {
  GameId game_id = 0;
  std::string lobby;
  std::string room_type = "game";
  std::vector<std::string> players;  // anonymized ids, leader first
  Timestamp start_time = 0;
  std::optional<Timestamp> end_time;
  int score = 0;
  std::int64_t event_count = 0;
  int instruction_count = 0;
  GameStatus status = GameStatus::Live;
  std::optional<std::string> final_hash;

  friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

struct Stats {
  std::int64_t game_count = 0;
  std::int64_t instruction_count = 0;
  std::optional<double> mean_score;
  std::optional<double> median_score;
  std::map<int, std::int64_t> score_histogram;

  friend bool operator==(const Stats&, const Stats&) = default;
};

void to_json(json& j, const GameRecord& r);
void from_json(const json& j, GameRecord& r);
void to_json(json& j, const Stats& s);

/// Stats over the completed (GameOver) games among `records`.
Stats compute_stats(const std::vector<GameRecord>& records);

/// Opaque, stable id for a display name.
std::string anonymize_player(std::string_view display_name);

/// Append-only event log per game in one SQLite file (or ":memory:").
/// Thread-safe; appends to different games may come from different threads.
class EventStore {
 public:
  struct Options {
    bool synchronous_full = true;  // fsync on every commit
  };

  explicit EventStore(const std::string& path, Options opts);
  explicit EventStore(const std::string& path = ":memory:") : EventStore(path, Options{}) {}
  ~EventStore();

  EventStore(const EventStore&) = delete;
  EventStore& operator=(const EventStore&) = delete;

  /// Reserves a game id; events are appended with append().
  GameId create_game(const std::string& lobby, const std::vector<std::string>& display_names,
                     const std::string& room_type = "game");

  /// Enforces dense seqs starting at a GameStart and nothing after a terminal event.
  void append(const GameEvent& event);
  void append(const std::vector<GameEvent>& events);

  /// Live state hash recorded when the game ended.
  void set_final_hash(GameId id, const std::string& hash);

  std::vector<GameEvent> events(GameId id) const;
  std::optional<GameRecord> record(GameId id) const;
  std::vector<GameRecord> records(std::int64_t limit, std::int64_t offset) const;
  std::int64_t game_count() const;
  Stats stats() const;

  /// Scores of the player's most recent completed games, newest first.
  std::vector<int> recent_scores(std::string_view display_name, int k) const;

  /// Inserts a finished game with its id unchanged; fails if the id is taken.
  void import_game(const GameRecord& record, const std::vector<GameEvent>& events);

 private:
  struct PendingAppend {
    const std::vector<GameEvent>* events;
    std::exception_ptr error;
    bool done = false;
  };

  void exec(const char* sql) const;
  void commit_group(const std::vector<PendingAppend*>& group);
  void append_locked(const std::vector<GameEvent>& events);

  sqlite3* db_ = nullptr;
  mutable std::mutex mu_;
  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::vector<PendingAppend*> queue_;
  bool committing_ = false;
};

/// Archive: `records.index` (one record per line) plus `game_<id>.events`
/// (one event per line), all in canonical form.
std::map<std::string, std::string> export_archive(const EventStore& store);
void import_archive(EventStore& store, const std::map<std::string, std::string>& files);
void export_archive_dir(const EventStore& store, const std::filesystem::path& dir);
void import_archive_dir(EventStore& store, const std::filesystem::path& dir);

}  // namespace cb2
