#include "cb2/event_store.hpp"

#include <algorithm>
#include <fstream>
#include <utility>
#include <sstream>

#include <sqlite3.h>

namespace cb2 {

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS games (
  game_id INTEGER PRIMARY KEY AUTOINCREMENT,
  lobby TEXT NOT NULL,
  room_type TEXT NOT NULL,
  players TEXT NOT NULL,
  start_time INTEGER NOT NULL DEFAULT 0,
  end_time INTEGER,
  score INTEGER NOT NULL DEFAULT 0,
  event_count INTEGER NOT NULL DEFAULT 0,
  instruction_count INTEGER NOT NULL DEFAULT 0,
  status TEXT NOT NULL DEFAULT 'live',
  final_hash TEXT
);
CREATE TABLE IF NOT EXISTS events (
  game_id INTEGER NOT NULL REFERENCES games(game_id),
  seq INTEGER NOT NULL,
  kind TEXT NOT NULL,
  wall_time INTEGER NOT NULL,
  body TEXT NOT NULL,
  PRIMARY KEY (game_id, seq)
);
)sql";

std::string_view status_name(GameStatus s) {
  switch (s) {
    case GameStatus::Live: return "live";
    case GameStatus::Over: return "over";
    case GameStatus::Abandoned: return "abandoned";
  }
  return "live";
}

GameStatus parse_status(std::string_view s) {
  if (s == "over") return GameStatus::Over;
  if (s == "abandoned") return GameStatus::Abandoned;
  if (s == "live") return GameStatus::Live;
  throw StoreError("unknown game status " + std::string(s));
}

class Stmt {
 public:
  Stmt(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &st_, nullptr) != SQLITE_OK) {
      throw StoreError(std::string("prepare failed: ") + sqlite3_errmsg(db));
    }
  }
  ~Stmt() { sqlite3_finalize(st_); }
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  Stmt& bind(int i, std::int64_t v) {
    sqlite3_bind_int64(st_, i, v);
    return *this;
  }
  Stmt& bind(int i, const std::string& v) {
    sqlite3_bind_text(st_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
    return *this;
  }
  Stmt& bind_null(int i) {
    sqlite3_bind_null(st_, i);
    return *this;
  }
  bool step() {
    const int rc = sqlite3_step(st_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw StoreError(std::string("sqlite: ") + sqlite3_errmsg(db_));
  }
  std::int64_t i64(int col) const { return sqlite3_column_int64(st_, col); }
  bool is_null(int col) const { return sqlite3_column_type(st_, col) == SQLITE_NULL; }
  std::string text(int col) const {
    const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(st_, col));
    return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(st_, col))) : std::string();
  }

 private:
  sqlite3* db_;
  sqlite3_stmt* st_ = nullptr;
};

constexpr const char* kRecordColumns =
    "game_id, lobby, room_type, players, start_time, end_time, score, event_count, instruction_count, "
    "status, final_hash";

GameRecord read_record(const Stmt& s) {
  GameRecord r;
  r.game_id = s.i64(0);
  r.lobby = s.text(1);
  r.room_type = s.text(2);
  r.players = json::parse(s.text(3)).get<std::vector<std::string>>();
  r.start_time = s.i64(4);
  if (!s.is_null(5)) r.end_time = s.i64(5);
  r.score = static_cast<int>(s.i64(6));
  r.event_count = s.i64(7);
  r.instruction_count = static_cast<int>(s.i64(8));
  r.status = parse_status(s.text(9));
  if (!s.is_null(10)) r.final_hash = s.text(10);
  return r;
}

struct Transaction {
  explicit Transaction(sqlite3* db) : db(db) { sqlite3_exec(db, "BEGIN IMMEDIATE", nullptr, nullptr, nullptr); }
  ~Transaction() {
    if (!done) sqlite3_exec(db, "ROLLBACK", nullptr, nullptr, nullptr);
  }
  void commit() {
    if (sqlite3_exec(db, "COMMIT", nullptr, nullptr, nullptr) != SQLITE_OK) {
      throw StoreError(std::string("commit failed: ") + sqlite3_errmsg(db));
    }
    done = true;
  }
  sqlite3* db;
  bool done = false;
};

}  // namespace

void to_json(json& j, const GameRecord& r) {
  j = json{{"game_id", r.game_id},
           {"lobby", r.lobby},
           {"room_type", r.room_type},
           {"players", r.players},
           {"start_time", r.start_time},
           {"end_time", r.end_time ? json(*r.end_time) : json(nullptr)},
           {"score", r.score},
           {"event_count", r.event_count},
           {"instruction_count", r.instruction_count},
           {"status", status_name(r.status)},
           {"final_hash", r.final_hash ? json(*r.final_hash) : json(nullptr)}};
}

void from_json(const json& j, GameRecord& r) {
  r.game_id = j.at("game_id").get<GameId>();
  r.lobby = j.at("lobby").get<std::string>();
  r.room_type = j.at("room_type").get<std::string>();
  r.players = j.at("players").get<std::vector<std::string>>();
  r.start_time = j.at("start_time").get<Timestamp>();
  r.end_time = j.at("end_time").is_null() ? std::nullopt : std::optional(j.at("end_time").get<Timestamp>());
  r.score = j.at("score").get<int>();
  r.event_count = j.at("event_count").get<std::int64_t>();
  r.instruction_count = j.at("instruction_count").get<int>();
  r.status = parse_status(j.at("status").get<std::string>());
  r.final_hash =
      j.at("final_hash").is_null() ? std::nullopt : std::optional(j.at("final_hash").get<std::string>());
}

void to_json(json& j, const Stats& s) {
  json hist = json::object();
  for (const auto& [score, n] : s.score_histogram) hist[std::to_string(score)] = n;
  j = json{{"game_count", s.game_count},
           {"instruction_count", s.instruction_count},
           {"mean_score", s.mean_score ? json(*s.mean_score) : json(nullptr)},
           {"median_score", s.median_score ? json(*s.median_score) : json(nullptr)},
           {"score_histogram", hist}};
}

Stats compute_stats(const std::vector<GameRecord>& records) {
  Stats out;
  std::vector<int> scores;
  for (const auto& r : records) {
    if (r.status != GameStatus::Over) continue;
    scores.push_back(r.score);
    out.instruction_count += r.instruction_count;
    ++out.score_histogram[r.score];
  }
  out.game_count = static_cast<std::int64_t>(scores.size());
  if (scores.empty()) return out;
  std::sort(scores.begin(), scores.end());
  double sum = 0;
  for (int s : scores) sum += s;
  out.mean_score = sum / static_cast<double>(scores.size());
  const std::size_t mid = scores.size() / 2;
  out.median_score = scores.size() % 2 ? scores[mid] : (scores[mid - 1] + scores[mid]) / 2.0;
  return out;
}

std::string anonymize_player(std::string_view display_name) {
  return "p_" + fnv1a_hex(display_name);
}

EventStore::EventStore(const std::string& path, Options opts) {
  if (sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                      nullptr) != SQLITE_OK) {
    const std::string why = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    throw StoreError("cannot open " + path + ": " + why);
  }
  if (path != ":memory:") exec("PRAGMA journal_mode=WAL");
  exec(opts.synchronous_full ? "PRAGMA synchronous=FULL" : "PRAGMA synchronous=NORMAL");
  exec(kSchema);
}

EventStore::~EventStore() { sqlite3_close(db_); }

void EventStore::exec(const char* sql) const {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    const std::string why = err ? err : "unknown error";
    sqlite3_free(err);
    throw StoreError("sqlite: " + why);
  }
}

GameId EventStore::create_game(const std::string& lobby, const std::vector<std::string>& display_names,
                               const std::string& room_type) {
  std::vector<std::string> ids;
  for (const auto& n : display_names) ids.push_back(anonymize_player(n));
  std::lock_guard lock(mu_);
  Stmt s(db_, "INSERT INTO games (lobby, room_type, players) VALUES (?, ?, ?)");
  s.bind(1, lobby).bind(2, room_type).bind(3, json(ids).dump());
  s.step();
  return sqlite3_last_insert_rowid(db_);
}

void EventStore::append(const GameEvent& e) { append(std::vector<GameEvent>{e}); }

// Concurrent appends are grouped: whichever caller finds no commit running
// writes every queued batch in one transaction, each under its own savepoint,
// so one fsync covers them all and a bad batch fails alone.
void EventStore::append(const std::vector<GameEvent>& events) {
  if (events.empty()) return;
  PendingAppend me{&events, nullptr};
  std::unique_lock ql(queue_mu_);
  queue_.push_back(&me);
  while (!me.done) {
    if (committing_) {
      queue_cv_.wait(ql);
      continue;
    }
    committing_ = true;
    std::vector<PendingAppend*> group = std::exchange(queue_, {});
    ql.unlock();
    commit_group(group);
    ql.lock();
    for (auto* p : group) p->done = true;
    committing_ = false;
    queue_cv_.notify_all();
  }
  if (me.error) std::rethrow_exception(me.error);
}

void EventStore::commit_group(const std::vector<PendingAppend*>& group) {
  std::lock_guard lock(mu_);
  try {
    Transaction tx(db_);
    for (auto* p : group) {
      exec("SAVEPOINT batch");
      try {
        append_locked(*p->events);
        exec("RELEASE batch");
      } catch (...) {
        p->error = std::current_exception();
        exec("ROLLBACK TO batch");
        exec("RELEASE batch");
      }
    }
    tx.commit();
  } catch (...) {
    for (auto* p : group) {
      if (!p->error) p->error = std::current_exception();
    }
  }
}

void EventStore::append_locked(const std::vector<GameEvent>& events) {
  for (const auto& e : events) {
    Stmt q(db_, "SELECT event_count, status, score, instruction_count FROM games WHERE game_id = ?");
    q.bind(1, e.game_id);
    if (!q.step()) throw StoreError("unknown game " + std::to_string(e.game_id));
    const std::int64_t count = q.i64(0);
    if (parse_status(q.text(1)) != GameStatus::Live) {
      throw StoreError("game " + std::to_string(e.game_id) + " already ended");
    }
    if (e.seq != count) {
      throw StoreError("seq " + std::to_string(e.seq) + " does not follow " + std::to_string(count - 1));
    }
    if ((count == 0) != e.is<event::GameStart>()) {
      throw StoreError(count == 0 ? "first event must be GameStart" : "GameStart after the first event");
    }
    int score = static_cast<int>(q.i64(2));
    int instructions = static_cast<int>(q.i64(3));
    if (const auto* set = e.as<event::SetCompleted>()) score = set->score;
    if (const auto* over = e.as<event::GameOver>()) score = over->score;
    if (e.is<event::InstructionSent>()) ++instructions;

    Stmt ins(db_, "INSERT INTO events (game_id, seq, kind, wall_time, body) VALUES (?, ?, ?, ?, ?)");
    ins.bind(1, e.game_id).bind(2, e.seq).bind(3, std::string(event_kind_name(e.body))).bind(4, e.wall_time);
    ins.bind(5, to_canonical(e));
    ins.step();

    const char* status = e.is<event::GameOver>() ? "over" : e.is<event::Abandoned>() ? "abandoned" : "live";
    Stmt up(db_,
            "UPDATE games SET event_count = ?, score = ?, instruction_count = ?, status = ?, "
            "start_time = CASE WHEN ? = 0 THEN ? ELSE start_time END, "
            "end_time = CASE WHEN ? != 'live' THEN ? ELSE end_time END WHERE game_id = ?");
    up.bind(1, count + 1).bind(2, score).bind(3, instructions).bind(4, std::string(status));
    up.bind(5, count).bind(6, e.wall_time).bind(7, std::string(status)).bind(8, e.wall_time).bind(9, e.game_id);
    up.step();
  }
}

void EventStore::set_final_hash(GameId id, const std::string& hash) {
  std::lock_guard lock(mu_);
  Stmt s(db_, "UPDATE games SET final_hash = ? WHERE game_id = ?");
  s.bind(1, hash).bind(2, id);
  s.step();
}

std::vector<GameEvent> EventStore::events(GameId id) const {
  std::lock_guard lock(mu_);
  Stmt s(db_, "SELECT body FROM events WHERE game_id = ? ORDER BY seq");
  s.bind(1, id);
  std::vector<GameEvent> out;
  while (s.step()) out.push_back(from_canonical<GameEvent>(s.text(0)));
  return out;
}

std::optional<GameRecord> EventStore::record(GameId id) const {
  std::lock_guard lock(mu_);
  Stmt s(db_, (std::string("SELECT ") + kRecordColumns + " FROM games WHERE game_id = ?").c_str());
  s.bind(1, id);
  if (!s.step()) return std::nullopt;
  return read_record(s);
}

std::vector<GameRecord> EventStore::records(std::int64_t limit, std::int64_t offset) const {
  std::lock_guard lock(mu_);
  Stmt s(db_, (std::string("SELECT ") + kRecordColumns + " FROM games ORDER BY game_id LIMIT ? OFFSET ?").c_str());
  s.bind(1, limit).bind(2, offset);
  std::vector<GameRecord> out;
  while (s.step()) out.push_back(read_record(s));
  return out;
}

std::int64_t EventStore::game_count() const {
  std::lock_guard lock(mu_);
  Stmt s(db_, "SELECT COUNT(*) FROM games");
  s.step();
  return s.i64(0);
}

Stats EventStore::stats() const { return compute_stats(records(-1, 0)); }

std::vector<int> EventStore::recent_scores(std::string_view display_name, int k) const {
  const std::string pattern = "%\"" + anonymize_player(display_name) + "\"%";
  std::lock_guard lock(mu_);
  Stmt s(db_, "SELECT score FROM games WHERE status = 'over' AND players LIKE ? ORDER BY game_id DESC LIMIT ?");
  s.bind(1, pattern).bind(2, k);
  std::vector<int> out;
  while (s.step()) out.push_back(static_cast<int>(s.i64(0)));
  return out;
}

void EventStore::import_game(const GameRecord& r, const std::vector<GameEvent>& events) {
  std::lock_guard lock(mu_);
  Transaction tx(db_);
  {
    Stmt q(db_, "SELECT 1 FROM games WHERE game_id = ?");
    q.bind(1, r.game_id);
    if (q.step()) throw StoreError("game " + std::to_string(r.game_id) + " already exists");
  }
  if (static_cast<std::int64_t>(events.size()) != r.event_count) {
    throw StoreError("event count of game " + std::to_string(r.game_id) + " does not match its record");
  }
  Stmt g(db_, (std::string("INSERT INTO games (") + kRecordColumns + ") VALUES (?,?,?,?,?,?,?,?,?,?,?)").c_str());
  g.bind(1, r.game_id).bind(2, r.lobby).bind(3, r.room_type).bind(4, json(r.players).dump());
  g.bind(5, r.start_time);
  if (r.end_time) g.bind(6, *r.end_time); else g.bind_null(6);
  g.bind(7, r.score).bind(8, r.event_count).bind(9, r.instruction_count).bind(10, std::string(status_name(r.status)));
  if (r.final_hash) g.bind(11, *r.final_hash); else g.bind_null(11);
  g.step();
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.game_id != r.game_id || e.seq != static_cast<std::int64_t>(i)) {
      throw StoreError("archived events of game " + std::to_string(r.game_id) + " are not dense");
    }
    Stmt ins(db_, "INSERT INTO events (game_id, seq, kind, wall_time, body) VALUES (?, ?, ?, ?, ?)");
    ins.bind(1, e.game_id).bind(2, e.seq).bind(3, std::string(event_kind_name(e.body))).bind(4, e.wall_time);
    ins.bind(5, to_canonical(e));
    ins.step();
  }
  tx.commit();
}

// ------------------------------------------------------------------ archive

std::map<std::string, std::string> export_archive(const EventStore& store) {
  std::map<std::string, std::string> files;
  std::string index;
  for (const auto& r : store.records(-1, 0)) {
    index += canonical(json(r)) + "\n";
    std::string lines;
    for (const auto& e : store.events(r.game_id)) lines += to_canonical(e) + "\n";
    files["game_" + std::to_string(r.game_id) + ".events"] = std::move(lines);
  }
  files["records.index"] = std::move(index);
  return files;
}

void import_archive(EventStore& store, const std::map<std::string, std::string>& files) {
  const auto index = files.find("records.index");
  if (index == files.end()) throw StoreError("archive has no records.index");
  std::istringstream lines(index->second);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const auto r = from_canonical<GameRecord>(line);
    const auto ev = files.find("game_" + std::to_string(r.game_id) + ".events");
    if (ev == files.end()) throw StoreError("archive lacks events of game " + std::to_string(r.game_id));
    std::vector<GameEvent> events;
    std::istringstream el(ev->second);
    std::string eline;
    while (std::getline(el, eline)) {
      if (!eline.empty()) events.push_back(from_canonical<GameEvent>(eline));
    }
    store.import_game(r, events);
  }
}

void export_archive_dir(const EventStore& store, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : export_archive(store)) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    if (!out) throw StoreError("cannot write " + (dir / name).string());
  }
}

void import_archive_dir(EventStore& store, const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[entry.path().filename().string()] = ss.str();
  }
  import_archive(store, files);
}

}  // namespace cb2
