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

// HTTP API for the dashboard. Long simulations run as background jobs on a
// bounded worker pool; clients poll their status.

#ifndef DIALOGFORGE_APP_SERVER_HPP
#define DIALOGFORGE_APP_SERVER_HPP

#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "dialogforge/app/store.hpp"
#include "dialogforge/runtime/http.hpp"

namespace dialogforge {

/// Machine-readable error body shared by the CLI and the API.
inline Json ErrorJson(const Error& e) {
  Json body{{"code", e.code()}, {"message", e.what()}};
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    Json violations = Json::array();
    for (const auto& x : v->violations())
      violations.push_back(Json{{"code", x.code}, {"path", x.path}, {"message", x.message}});
    body["violations"] = violations;
  }
  return Json{{"error", body}};
}

/// HTTP status for a library error.
inline int HttpStatus(const Error& e) {
  const std::string& c = e.code();
  if (c == "UnknownSession" || c == "NotFound" || c == "UnknownVertex") return 404;
  if (c == "SyntaxError" || c == "BadRequest") return 400;
  if (c == "UnrevisedMapError" || c == "StageError" || c == "VersionConflict" || c == "JobActive" ||
      c == "OutputExists")
    return 409;
  if (c == "ValidationError" || c == "SchemaError" || c == "ConfigError" || c == "UnknownTarget" ||
      c == "MissingOntologyValue" || c == "EmptyLexicon" || c == "UnknownIntent")
    return 422;
  return 500;
}

DIALOGFORGE_DEFINE_ERROR(NotFound);
DIALOGFORGE_DEFINE_ERROR(BadRequest);
DIALOGFORGE_DEFINE_ERROR(VersionConflict);
DIALOGFORGE_DEFINE_ERROR(JobActive);

enum class JobStatus { kQueued, kRunning, kDone, kFailed };

inline std::string ToString(JobStatus s) {
  switch (s) {
    case JobStatus::kQueued: return "queued";
    case JobStatus::kRunning: return "running";
    case JobStatus::kDone: return "done";
    case JobStatus::kFailed: return "failed";
  }
  return "queued";
}

struct JobRecord {
  std::string id;
  std::string session_id;
  std::string kind;
  JobStatus status = JobStatus::kQueued;
  std::optional<Json> error;
  std::string created_at;
  std::string updated_at;
};

inline Json ToJson(const JobRecord& j) {
  return Json{{"job_id", j.id},
              {"session_id", j.session_id},
              {"kind", j.kind},
              {"status", ToString(j.status)},
              {"error", j.error ? *j.error : Json(nullptr)},
              {"created_at", j.created_at},
              {"updated_at", j.updated_at}};
}

/// Bounded pool running one job at a time per worker, FIFO.
class JobQueue {
 public:
  explicit JobQueue(std::size_t workers) {
    for (std::size_t i = 0; i < std::max<std::size_t>(workers, 1); ++i)
      workers_.emplace_back([this](std::stop_token stop) { Work(stop); });
  }
  ~JobQueue() {
    {
      std::lock_guard lock(mutex_);
      for (auto& w : workers_) w.request_stop();
    }
    cv_.notify_all();
    workers_.clear();
  }

  /// Queues `task` for `session`; at most one unfinished job per session.
  JobRecord Submit(const std::string& session, const std::string& kind, std::function<void()> task) {
    std::lock_guard lock(mutex_);
    for (const auto& [id, job] : jobs_)
      if (job.session_id == session && (job.status == JobStatus::kQueued || job.status == JobStatus::kRunning))
        throw JobActive("session '" + session + "' already has job '" + id + "' in progress");
    JobRecord job;
    job.id = "job-" + std::to_string(++counter_);
    job.session_id = session;
    job.kind = kind;
    job.created_at = job.updated_at = UtcTimestamp();
    jobs_[job.id] = job;
    pending_.push_back({job.id, std::move(task)});
    cv_.notify_one();
    return job;
  }

  std::optional<JobRecord> Find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) return std::nullopt;
    return it->second;
  }

  bool HasActive(const std::string& session) const {
    std::lock_guard lock(mutex_);
    for (const auto& [id, job] : jobs_)
      if (job.session_id == session && (job.status == JobStatus::kQueued || job.status == JobStatus::kRunning))
        return true;
    return false;
  }

 private:
  void Work(std::stop_token stop) {
    while (true) {
      std::pair<std::string, std::function<void()>> item;
      {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return stop.stop_requested() || !pending_.empty(); });
        if (stop.stop_requested()) return;
        item = std::move(pending_.front());
        pending_.pop_front();
        Update(item.first, JobStatus::kRunning, std::nullopt);
      }
      std::optional<Json> error;
      try {
        item.second();
      } catch (const Error& e) {
        error = ErrorJson(e)["error"];
      } catch (const std::exception& e) {
        error = Json{{"code", "InternalError"}, {"message", e.what()}};
      }
      std::lock_guard lock(mutex_);
      Update(item.first, error ? JobStatus::kFailed : JobStatus::kDone, error);
    }
  }

  void Update(const std::string& id, JobStatus status, std::optional<Json> error) {
    auto& job = jobs_.at(id);
    job.status = status;
    job.error = std::move(error);
    job.updated_at = UtcTimestamp();
  }

  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::map<std::string, JobRecord> jobs_;
  std::deque<std::pair<std::string, std::function<void()>>> pending_;
  std::size_t counter_ = 0;
  std::vector<std::jthread> workers_;
};

struct ApiOptions {
  std::filesystem::path data_dir = "dialogforge-data";
  PipelineConfig defaults;
  std::size_t job_workers = 2;
  std::optional<std::filesystem::path> static_dir;
};

/// The dashboard-facing API over a session store. Every stage runs through
/// the same pipeline functions as the CLI.
class ApiService {
 public:
  ApiService(SessionStore& store, ApiOptions options)
      : store_(store), options_(std::move(options)), jobs_(options_.job_workers) {}

  void Mount(httplib::Server& server) {
    server.Get("/api/health", Handler([](const httplib::Request&, httplib::Response& res) {
      SendJson(res, 200, Json{{"ok", true}});
    }));
    server.Post("/api/sessions", Handler([this](const auto& req, auto& res) { CreateSession(req, res); }));
    server.Get("/api/sessions", Handler([this](const auto&, auto& res) {
      Json list = Json::array();
      for (const auto& s : store_.List()) list.push_back(ToJson(s));
      SendJson(res, 200, Json{{"sessions", list}});
    }));
    server.Get("/api/history", Handler([this](const auto&, auto& res) { SendJson(res, 200, History()); }));
    server.Get(R"(/api/sessions/([^/]+))", Handler([this](const auto& req, auto& res) {
      SendJson(res, 200, ToJson(store_.Get(req.matches[1])));
    }));
    server.Delete(R"(/api/sessions/([^/]+))", Handler([this](const auto& req, auto& res) {
      const std::string id = req.matches[1];
      auto lock = LockSession(id);
      auto s = store_.Get(id);
      if (jobs_.HasActive(id)) throw JobActive("session '" + id + "' has a job in progress");
      store_.Delete(id);
      std::filesystem::remove_all(s.workdir);
      res.status = 204;
    }));
    server.Get(R"(/api/sessions/([^/]+)/dialog-act-maps)", Handler([this](const auto& req, auto& res) {
      const std::string id = req.matches[1];
      auto s = store_.Get(id);
      auto version = store_.ArtifactVersion(id, "maps");
      res.set_header("ETag", "\"" + std::to_string(version) + "\"");
      Json maps = Json::array();
      for (const auto& m : LoadMaps(Workdir(s.workdir))) maps.push_back(ToJson(m));
      SendJson(res, 200, Json{{"version", version}, {"maps", maps}});
    }));
    server.Put(R"(/api/sessions/([^/]+)/dialog-act-maps)", Handler([this](const auto& req, auto& res) {
      PutMaps(req, res);
    }));
    server.Get(R"(/api/sessions/([^/]+)/ontology)", Handler([this](const auto& req, auto& res) {
      const std::string id = req.matches[1];
      auto s = store_.Get(id);
      auto version = store_.ArtifactVersion(id, "ontology");
      res.set_header("ETag", "\"" + std::to_string(version) + "\"");
      SendJson(res, 200, Json{{"version", version}, {"ontology", ToJson(LoadOntology(Workdir(s.workdir)))}});
    }));
    server.Put(R"(/api/sessions/([^/]+)/ontology)", Handler([this](const auto& req, auto& res) {
      PutOntology(req, res);
    }));
    server.Post(R"(/api/sessions/([^/]+)/goals)", Handler([this](const auto& req, auto& res) { PostGoals(req, res); }));
    server.Post(R"(/api/sessions/([^/]+)/simulate)", Handler([this](const auto& req, auto& res) {
      PostSimulate(req, res);
    }));
    server.Get(R"(/api/sessions/([^/]+)/jobs/([^/]+))", Handler([this](const auto& req, auto& res) {
      auto job = jobs_.Find(req.matches[2]);
      if (!job || job->session_id != req.matches[1]) throw NotFound("no job '" + std::string(req.matches[2]) + "'");
      SendJson(res, 200, ToJson(*job));
    }));
    server.Get(R"(/api/sessions/([^/]+)/report)", Handler([this](const auto& req, auto& res) {
      Workdir wd(store_.Get(req.matches[1]).workdir);
      if (!std::filesystem::exists(wd.report())) throw NotFound("session has no report yet");
      res.status = 200;
      res.set_content(ReadFile(wd.report()), "application/json");
    }));
    server.Get(R"(/api/sessions/([^/]+)/episodes/([^/]+))", Handler([this](const auto& req, auto& res) {
      Workdir wd(store_.Get(req.matches[1]).workdir);
      if (!std::filesystem::exists(wd.episodes())) throw NotFound("session has no episodes yet");
      for (const auto& row : ReadJsonLines(wd.episodes()))
        if (row.value("goal_id", "") == req.matches[2]) return SendJson(res, 200, row);
      throw NotFound("no episode '" + std::string(req.matches[2]) + "'");
    }));
    server.Get(R"(/api/sessions/([^/]+)/paths)", Handler([this](const auto& req, auto& res) { GetPaths(req, res); }));
    if (options_.static_dir) server.set_mount_point("/", options_.static_dir->string());
  }

 private:
  using RawHandler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static RawHandler Handler(RawHandler inner) {
    return [inner = std::move(inner)](const httplib::Request& req, httplib::Response& res) {
      try {
        inner(req, res);
      } catch (const Error& e) {
        SendJson(res, HttpStatus(e), ErrorJson(e));
      } catch (const Json::exception& e) {
        SendError(res, 422, "SchemaError", e.what());
      } catch (const std::exception& e) {
        SendError(res, 500, "InternalError", e.what());
      }
    };
  }

  static Json Body(const httplib::Request& req) {
    if (req.body.empty()) return Json::object();
    auto body = Json::parse(req.body, nullptr, false);
    if (body.is_discarded()) throw SyntaxError("request body is not valid JSON");
    if (!body.is_object()) throw SchemaError("request body must be a JSON object");
    return body;
  }

  std::unique_lock<std::mutex> LockSession(const std::string& id) {
    std::lock_guard lock(locks_mutex_);
    auto& m = session_locks_[id];
    if (!m) m = std::make_unique<std::mutex>();
    return std::unique_lock(*m);
  }

  PipelineConfig SessionConfig(const SessionEntry& s) const { return PipelineConfigFromJson(s.config); }

  void Record(const std::string& id, const Workdir& wd, std::initializer_list<std::string> kinds) {
    for (const auto& kind : kinds) {
      std::filesystem::path p = kind == "maps"          ? wd.maps_dir()
                                : kind == "ontology"    ? wd.ontology()
                                : kind == "graph"       ? wd.graph()
                                : kind == "bot"         ? wd.bot()
                                : kind == "paraphrases" ? wd.paraphrases()
                                : kind == "goals"       ? wd.goals()
                                : kind == "episodes"    ? wd.episodes()
                                : kind == "runtime_log" ? wd.runtime_log()
                                                        : wd.report();
      if (std::filesystem::exists(p)) store_.RecordArtifact(id, kind, p.string());
    }
  }

  static void CheckVersion(const httplib::Request& req, const Json& body, std::int64_t current) {
    std::optional<std::int64_t> expected;
    if (body.contains("version")) {
      if (!body["version"].is_number_integer()) throw SchemaError("version must be an integer");
      expected = body["version"].get<std::int64_t>();
    } else if (req.has_header("If-Match")) {
      std::string tag = req.get_header_value("If-Match");
      tag.erase(std::remove(tag.begin(), tag.end(), '"'), tag.end());
      try {
        expected = std::stoll(tag);
      } catch (const std::exception&) {
        throw BadRequest("If-Match must carry a version number");
      }
    }
    if (expected && *expected != current)
      throw VersionConflict("artifact changed on the server: expected version " + std::to_string(*expected) +
                            ", current " + std::to_string(current));
  }

  void CreateSession(const httplib::Request& req, httplib::Response& res) {
    const Json body = Body(req);
    if (!body.contains("bot") || !body["bot"].is_object()) throw SchemaError("'bot' must be a bot definition object");
    const PipelineConfig config =
        body.contains("config") ? PipelineConfigFromJson(body["config"], options_.defaults) : options_.defaults;
    const Json* sidecar = body.contains("utterances") ? &body["utterances"] : nullptr;
    const auto def = LoadBotDefinitionFromString(body["bot"].dump(), sidecar);
    const std::string name = body.contains("name") && body["name"].is_string() ? body["name"].get<std::string>() : def.name;

    auto s = store_.Create(name, ToJson(config), options_.data_dir / "sessions");
    auto lock = LockSession(s.id);
    Workdir wd(s.workdir);
    try {
      PrepareOutputDir(wd.root(), true);
      ParseStage(def, wd, config);
    } catch (...) {
      store_.Delete(s.id);
      std::filesystem::remove_all(wd.root());
      throw;
    }
    Record(s.id, wd, {"bot", "graph", "maps", "ontology"});
    store_.AdvanceStage(s.id, Stage::kParsed);
    SendJson(res, 201, ToJson(store_.Get(s.id)));
  }

  void PutMaps(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto lock = LockSession(id);
    auto s = store_.Get(id);
    const Json body = Body(req);
    CheckVersion(req, body, store_.ArtifactVersion(id, "maps"));
    if (!body.contains("maps") || !body["maps"].is_array()) throw SchemaError("'maps' must be an array");
    std::vector<DialogActMap> maps;
    for (const auto& m : body["maps"]) {
      auto map = DialogActMapFromJson(m);
      map.revised = true;
      maps.push_back(std::move(map));
    }
    Workdir wd(s.workdir);
    ReplaceMaps(wd, maps);
    auto version = store_.RecordArtifact(id, "maps", wd.maps_dir().string());
    store_.AdvanceStage(id, Stage::kRevised);
    Json out = Json::array();
    for (const auto& m : LoadMaps(wd)) out.push_back(ToJson(m));
    res.set_header("ETag", "\"" + std::to_string(version) + "\"");
    SendJson(res, 200, Json{{"version", version}, {"maps", out}});
  }

  void PutOntology(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto lock = LockSession(id);
    auto s = store_.Get(id);
    const Json body = Body(req);
    CheckVersion(req, body, store_.ArtifactVersion(id, "ontology"));
    if (!body.contains("ontology")) throw SchemaError("'ontology' is required");
    Workdir wd(s.workdir);
    auto ontology = OntologyFromJson(body["ontology"]);
    std::set<std::string> dialogs;
    for (const auto& m : LoadMaps(wd)) dialogs.insert(m.dialog);
    for (const auto& [dialog, _] : ontology.dialogs)
      if (!dialogs.contains(dialog)) throw UnknownTarget("ontology names unknown dialog '" + dialog + "'");
    ReplaceOntology(wd, ontology);
    auto version = store_.RecordArtifact(id, "ontology", wd.ontology().string());
    res.set_header("ETag", "\"" + std::to_string(version) + "\"");
    SendJson(res, 200, Json{{"version", version}, {"ontology", ToJson(LoadOntology(wd))}});
  }

  void PostGoals(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto lock = LockSession(id);
    auto s = store_.Get(id);
    const Json body = Body(req);
    if (jobs_.HasActive(id)) throw JobActive("session '" + id + "' has a job in progress");
    if (s.stage > Stage::kGoalsReady) throw StageError("session '" + id + "' was already simulated");
    std::optional<Json> ingested;
    if (body.contains("paraphrases")) ingested = body["paraphrases"];
    Workdir wd(s.workdir);
    auto summary = GenerateStage(wd, SessionConfig(s), ingested);
    Record(id, wd, {"paraphrases", "goals"});
    store_.AdvanceStage(id, Stage::kGoalsReady);
    SendJson(res, 200, Json{{"goals", summary.goals},
                            {"paraphrases", summary.paraphrases},
                            {"goals_per_intent", summary.goals_per_intent},
                            {"session", ToJson(store_.Get(id))}});
  }

  void PostSimulate(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto s = store_.Get(id);
    Body(req);
    if (s.stage < Stage::kGoalsReady) throw StageError("session '" + id + "' has no goals; POST goals first");
    auto job = jobs_.Submit(id, "simulate", [this, id] {
      auto lock = LockSession(id);
      auto entry = store_.Get(id);
      const auto config = SessionConfig(entry);
      Workdir wd(entry.workdir);
      auto sim = SimulateStage(wd, config);
      Record(id, wd, {"episodes", "runtime_log"});
      store_.AdvanceStage(id, Stage::kSimulated);
      auto report = RemediateStage(wd, config);
      Record(id, wd, {"report"});
      store_.PutMetrics(id, {{"episodes", static_cast<double>(sim.counts.episodes)},
                             {"completion_rate", report["summary"]["completion_rate"]["point"].get<double>()},
                             {"macro_f1", report["summary"]["macro_f1"]["point"].get<double>()}});
      store_.AdvanceStage(id, Stage::kRemediated);
    });
    SendJson(res, 202, ToJson(job));
  }

  void GetPaths(const httplib::Request& req, httplib::Response& res) {
    auto s = store_.Get(req.matches[1]);
    if (!req.has_param("source") || !req.has_param("target")) throw BadRequest("source and target are required");
    auto number = [&](const char* key) -> std::optional<std::size_t> {
      if (!req.has_param(key)) return std::nullopt;
      const std::string v = req.get_param_value(key);
      if (v.empty() || v.size() > 9 || !std::all_of(v.begin(), v.end(), ::isdigit))
        throw BadRequest(std::string(key) + " must be a non-negative integer");
      return static_cast<std::size_t>(std::stoul(v));
    };
    const auto max_length = number("max_length");
    const auto max_paths = number("max_paths").value_or(kDefaultMaxPaths);
    const auto graph = LoadGraph(Workdir(s.workdir));
    auto result = EnumeratePaths(graph, req.get_param_value("source"), req.get_param_value("target"), max_length,
                                 max_paths);
    Json out = ToJson(result);
    out["source"] = req.get_param_value("source");
    out["target"] = req.get_param_value("target");
    SendJson(res, 200, out);
  }

  Json History() {
    std::vector<HistoryEntry> entries;
    for (const auto& s : store_.List()) {
      Workdir wd(s.workdir);
      if (s.stage == Stage::kRemediated && std::filesystem::exists(wd.report()))
        entries.push_back(HistoryEntryFromReport(s.id, ReadJsonFile(wd.report())));
    }
    return Json{{"history", RenderHistory(entries)}};
  }

  SessionStore& store_;
  ApiOptions options_;
  std::mutex locks_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> session_locks_;
  JobQueue jobs_;
};

}  // namespace dialogforge

#endif  // DIALOGFORGE_APP_SERVER_HPP
