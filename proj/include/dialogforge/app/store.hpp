// Copyright 2026 The DialogForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Session store on SQLite. Logical schema:
//   sessions(id, name, stage, created_at, updated_at, config, workdir)
//   artifacts(session_id, kind, path, version, updated_at)
//   metrics(session_id, key, value)

#ifndef DIALOGFORGE_APP_STORE_HPP
#define DIALOGFORGE_APP_STORE_HPP

#include <sqlite3.h>

#include <chrono>
#include <ctime>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "dialogforge/app/pipeline.hpp"

namespace dialogforge {

DIALOGFORGE_DEFINE_ERROR(StoreError);
DIALOGFORGE_DEFINE_ERROR(UnknownSession);

struct ArtifactEntry {
  std::string path;
  std::int64_t version = 0;
  std::string updated_at;
};

struct SessionEntry {
  std::string id;
  std::string name;
  Stage stage = Stage::kNone;
  std::string created_at;
  std::string updated_at;
  Json config;
  std::string workdir;
  std::map<std::string, ArtifactEntry> artifacts;
  std::map<std::string, double> metrics;
};

inline Json ToJson(const SessionEntry& s) {
  Json artifacts = Json::object();
  for (const auto& [kind, a] : s.artifacts)
    artifacts[kind] = Json{{"path", a.path}, {"version", a.version}, {"updated_at", a.updated_at}};
  return Json{{"session_id", s.id},    {"name", s.name},       {"stage", ToString(s.stage)},
              {"created_at", s.created_at}, {"updated_at", s.updated_at}, {"config", s.config},
              {"artifacts", artifacts}, {"metrics", s.metrics}};
}

inline std::string UtcTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

class SessionStore {
 public:
  explicit SessionStore(const std::filesystem::path& db_path) {
    if (db_path.has_parent_path()) std::filesystem::create_directories(db_path.parent_path());
    if (sqlite3_open(db_path.string().c_str(), &db_) != SQLITE_OK) {
      std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
      sqlite3_close(db_);
      throw StoreError("cannot open session store '" + db_path.string() + "': " + msg);
    }
    sqlite3_busy_timeout(db_, 5000);
    Exec("PRAGMA foreign_keys = ON");
    Exec(R"(CREATE TABLE IF NOT EXISTS sessions (
              id TEXT PRIMARY KEY, name TEXT NOT NULL, stage TEXT NOT NULL,
              created_at TEXT NOT NULL, updated_at TEXT NOT NULL,
              config TEXT NOT NULL, workdir TEXT NOT NULL))");
    Exec(R"(CREATE TABLE IF NOT EXISTS artifacts (
              session_id TEXT NOT NULL REFERENCES sessions(id) ON DELETE CASCADE,
              kind TEXT NOT NULL, path TEXT NOT NULL, version INTEGER NOT NULL,
              updated_at TEXT NOT NULL, PRIMARY KEY (session_id, kind)))");
    Exec(R"(CREATE TABLE IF NOT EXISTS metrics (
              session_id TEXT NOT NULL REFERENCES sessions(id) ON DELETE CASCADE,
              key TEXT NOT NULL, value REAL NOT NULL, PRIMARY KEY (session_id, key)))");
  }
  ~SessionStore() { sqlite3_close(db_); }
  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  SessionEntry Create(const std::string& name, const Json& config, const std::filesystem::path& workdir_root) {
    std::lock_guard lock(mutex_);
    SessionEntry s;
    s.id = NewId();
    s.name = name;
    s.created_at = s.updated_at = UtcTimestamp();
    s.config = config;
    s.workdir = (workdir_root / s.id).string();
    Statement st(db_, "INSERT INTO sessions VALUES (?, ?, ?, ?, ?, ?, ?)");
    st.Bind(1, s.id).Bind(2, s.name).Bind(3, ToString(s.stage)).Bind(4, s.created_at).Bind(5, s.updated_at);
    st.Bind(6, config.dump()).Bind(7, s.workdir);
    st.Done();
    return s;
  }

  std::vector<SessionEntry> List() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> ids;
    Statement st(db_, "SELECT id FROM sessions ORDER BY created_at, id");
    while (st.Step()) ids.push_back(st.Text(0));
    std::vector<SessionEntry> out;
    for (const auto& id : ids) out.push_back(LoadLocked(id));
    return out;
  }

  SessionEntry Get(const std::string& id) const {
    std::lock_guard lock(mutex_);
    return LoadLocked(id);
  }

  bool Exists(const std::string& id) const {
    std::lock_guard lock(mutex_);
    Statement st(db_, "SELECT 1 FROM sessions WHERE id = ?");
    st.Bind(1, id);
    return st.Step();
  }

  /// Stages only move forward; setting the current stage again is allowed.
  void AdvanceStage(const std::string& id, Stage stage) {
    std::lock_guard lock(mutex_);
    auto current = LoadLocked(id).stage;
    if (stage < current)
      throw StageError("session '" + id + "' is at stage " + ToString(current) + "; cannot return to " + ToString(stage));
    Statement st(db_, "UPDATE sessions SET stage = ?, updated_at = ? WHERE id = ?");
    st.Bind(1, ToString(stage)).Bind(2, UtcTimestamp()).Bind(3, id);
    st.Done();
  }

  /// Records a new version of an artifact and returns it.
  std::int64_t RecordArtifact(const std::string& id, const std::string& kind, const std::string& path) {
    std::lock_guard lock(mutex_);
    LoadLocked(id);
    const auto now = UtcTimestamp();
    Statement st(db_, R"(INSERT INTO artifacts VALUES (?, ?, ?, 1, ?)
                         ON CONFLICT(session_id, kind) DO UPDATE SET
                           path = excluded.path, version = version + 1, updated_at = excluded.updated_at)");
    st.Bind(1, id).Bind(2, kind).Bind(3, path).Bind(4, now);
    st.Done();
    Statement touch(db_, "UPDATE sessions SET updated_at = ? WHERE id = ?");
    touch.Bind(1, now).Bind(2, id);
    touch.Done();
    return LoadLocked(id).artifacts.at(kind).version;
  }

  std::int64_t ArtifactVersion(const std::string& id, const std::string& kind) const {
    std::lock_guard lock(mutex_);
    auto s = LoadLocked(id);
    auto it = s.artifacts.find(kind);
    return it == s.artifacts.end() ? 0 : it->second.version;
  }

  void PutMetrics(const std::string& id, const std::map<std::string, double>& metrics) {
    std::lock_guard lock(mutex_);
    LoadLocked(id);
    for (const auto& [key, value] : metrics) {
      Statement st(db_, "INSERT OR REPLACE INTO metrics VALUES (?, ?, ?)");
      st.Bind(1, id).Bind(2, key).Bind(3, value);
      st.Done();
    }
  }

  void Delete(const std::string& id) {
    std::lock_guard lock(mutex_);
    LoadLocked(id);
    Statement st(db_, "DELETE FROM sessions WHERE id = ?");
    st.Bind(1, id);
    st.Done();
  }

 private:
  class Statement {
   public:
    Statement(sqlite3* db, const char* sql) : db_(db) {
      if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK)
        throw StoreError(std::string("prepare failed: ") + sqlite3_errmsg(db));
    }
    ~Statement() { sqlite3_finalize(stmt_); }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;

    Statement& Bind(int i, const std::string& v) {
      sqlite3_bind_text(stmt_, i, v.c_str(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
      return *this;
    }
    Statement& Bind(int i, double v) {
      sqlite3_bind_double(stmt_, i, v);
      return *this;
    }
    bool Step() {
      int rc = sqlite3_step(stmt_);
      if (rc == SQLITE_ROW) return true;
      if (rc == SQLITE_DONE) return false;
      throw StoreError(std::string("query failed: ") + sqlite3_errmsg(db_));
    }
    void Done() {
      while (Step()) {
      }
    }
    std::string Text(int col) const {
      auto p = sqlite3_column_text(stmt_, col);
      return p ? reinterpret_cast<const char*>(p) : "";
    }
    std::int64_t Int(int col) const { return sqlite3_column_int64(stmt_, col); }
    double Real(int col) const { return sqlite3_column_double(stmt_, col); }

   private:
    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
  };

  void Exec(const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown error";
      sqlite3_free(err);
      throw StoreError("schema setup failed: " + msg);
    }
  }

  static std::string NewId() {
    std::random_device rd;
    std::uint64_t v = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    char buf[24];
    std::snprintf(buf, sizeof buf, "s%016llx", static_cast<unsigned long long>(v));
    return buf;
  }

  SessionEntry LoadLocked(const std::string& id) const {
    Statement st(db_, "SELECT id, name, stage, created_at, updated_at, config, workdir FROM sessions WHERE id = ?");
    st.Bind(1, id);
    if (!st.Step()) throw UnknownSession("no session '" + id + "'");
    SessionEntry s;
    s.id = st.Text(0);
    s.name = st.Text(1);
    s.stage = StageFromString(st.Text(2));
    s.created_at = st.Text(3);
    s.updated_at = st.Text(4);
    s.config = Json::parse(st.Text(5));
    s.workdir = st.Text(6);
    Statement a(db_, "SELECT kind, path, version, updated_at FROM artifacts WHERE session_id = ? ORDER BY kind");
    a.Bind(1, id);
    while (a.Step()) s.artifacts[a.Text(0)] = {a.Text(1), a.Int(2), a.Text(3)};
    Statement m(db_, "SELECT key, value FROM metrics WHERE session_id = ? ORDER BY key");
    m.Bind(1, id);
    while (m.Step()) s.metrics[m.Text(0)] = m.Real(1);
    return s;
  }

  sqlite3* db_ = nullptr;
  mutable std::mutex mutex_;
};

}  // namespace dialogforge

#endif  // DIALOGFORGE_APP_STORE_HPP
