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

// dialogforge command-line interface.

#include <csignal>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "dialogforge/app.hpp"

namespace df = dialogforge;

namespace {

int ExitCode(const df::Error& e) {
  static const std::set<std::string> kInvalidInput = {"SyntaxError", "SchemaError", "ValidationError", "ConfigError",
                                                      "IoError",     "UnknownTarget", "EmptyLexicon",
                                                      "MissingOntologyValue", "UnknownIntent"};
  static const std::set<std::string> kGated = {"StageError", "UnrevisedMapError", "OutputExists"};
  if (kInvalidInput.contains(e.code())) return 2;
  if (kGated.contains(e.code())) return 3;
  return 1;
}

struct CommonOptions {
  std::string out;
  std::string config;
  std::optional<std::uint64_t> seed;
  bool force = false;
};

void AddCommon(CLI::App* cmd, CommonOptions& o, bool needs_out = true) {
  auto* out = cmd->add_option("--out", o.out, "Working directory");
  if (needs_out) out->required();
  cmd->add_option("--config", o.config, "Pipeline configuration JSON");
  cmd->add_option("--seed", o.seed, "Master seed (overrides the configuration)");
}

/// --config, else the snapshot in the working directory, else defaults;
/// --seed overrides. An override is written back as the new snapshot.
df::PipelineConfig ResolveConfig(const CommonOptions& o, bool write_back) {
  df::PipelineConfig config;
  const bool has_workdir = !o.out.empty();
  const df::Workdir wd(o.out);
  if (!o.config.empty()) {
    config = df::LoadPipelineConfig(o.config);
  } else if (has_workdir && std::filesystem::exists(wd.config())) {
    config = df::LoadPipelineConfig(wd.config());
  }
  if (o.seed) config.seed = *o.seed;
  if (write_back && has_workdir && (!o.config.empty() || o.seed) && std::filesystem::exists(wd.root()))
    df::WriteJsonFile(wd.config(), df::ToJson(config));
  return config;
}

std::string EnvOr(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

httplib::Server* g_server = nullptr;

void StopServer(int) {
  if (g_server) g_server->stop();
}

int Serve(httplib::Server& server, const std::string& host, int port, const std::string& what) {
  if (!server.bind_to_port(host, port)) throw df::BindError("cannot bind " + host + ":" + std::to_string(port));
  g_server = &server;
  std::signal(SIGINT, StopServer);
  std::signal(SIGTERM, StopServer);
  std::cout << what << " listening on http://" << host << ":" << port << std::endl;
  server.listen_after_bind();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate, simulate and remediate task-oriented dialog bots."};
  app.require_subcommand(1);

  CommonOptions parse_opts;
  std::string bot_path, utterances_path;
  auto* parse = app.add_subcommand("parse", "Parse a bot definition into dialog-act maps, ontology and graph");
  parse->add_option("bot", bot_path, "Bot definition JSON")->required();
  parse->add_option("--utterances", utterances_path, "Training-utterance sidecar (intent -> list)");
  AddCommon(parse, parse_opts);
  parse->add_flag("--force", parse_opts.force, "Overwrite a non-empty output directory");

  CommonOptions revise_opts;
  std::string revision_path;
  auto* revise = app.add_subcommand("revise", "Apply a revision document and mark the maps as reviewed");
  AddCommon(revise, revise_opts);
  revise->add_option("--revision", revision_path, "Revision document JSON (omit to confirm the maps as they are)");

  CommonOptions generate_opts;
  std::string paraphrase_path;
  auto* generate = app.add_subcommand("generate", "Generate paraphrases and simulation goals");
  AddCommon(generate, generate_opts);
  generate->add_option("--paraphrases", paraphrase_path, "Ingest paraphrases from this file instead of generating");

  CommonOptions simulate_opts;
  std::string endpoint;
  std::optional<std::size_t> parallelism;
  auto* simulate = app.add_subcommand("simulate", "Simulate every goal against the bot");
  AddCommon(simulate, simulate_opts);
  simulate->add_option("--endpoint", endpoint, "Chat endpoint base URL (default: embedded runtime)");
  simulate->add_option("--parallelism", parallelism, "Concurrent episodes")->check(CLI::Range(1, 256));

  CommonOptions remediate_opts;
  std::vector<std::string> history_reports;
  auto* remediate = app.add_subcommand("remediate", "Aggregate episodes into the remediation report");
  AddCommon(remediate, remediate_opts);
  remediate->add_option("--history", history_reports, "Reports of earlier sessions, oldest first");

  CommonOptions retrain_opts;
  std::string eval_path;
  auto* retrain = app.add_subcommand("retrain", "Retrain the intent model on failing queries and compare");
  AddCommon(retrain, retrain_opts);
  retrain->add_option("--eval-utterances", eval_path, "Held-out utterances (intent -> list)");

  CommonOptions serve_opts;
  std::optional<int> port;
  std::string db_path, data_dir, static_dir, host = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--config", serve_opts.config, "Default pipeline configuration for new sessions");
  serve->add_option("--port", port, "Port (default $DIALOGFORGE_PORT or 8080)");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--db", db_path, "Session store (default $DIALOGFORGE_DB or dialogforge.db)");
  serve->add_option("--data-dir", data_dir, "Artifact directory (default: next to the store)");
  serve->add_option("--static", static_dir, "Dashboard assets to serve at /");

  CommonOptions bot_opts;
  std::string bot_def, bot_utterances;
  std::optional<int> bot_port;
  auto* bot = app.add_subcommand("bot", "Serve the reference bot runtime over the chat protocol");
  bot->add_option("bot", bot_def, "Bot definition JSON")->required();
  bot->add_option("--utterances", bot_utterances, "Training-utterance sidecar");
  bot->add_option("--config", bot_opts.config, "Pipeline configuration (runtime section is used)");
  bot->add_option("--port", bot_port, "Port (default $DIALOGFORGE_BOT_PORT or 8081)");
  bot->add_option("--host", host, "Bind address");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*parse) {
      std::optional<std::filesystem::path> sidecar;
      if (!utterances_path.empty()) sidecar = utterances_path;
      auto def = df::LoadBotDefinition(bot_path, sidecar);
      auto config = ResolveConfig({"", parse_opts.config, parse_opts.seed, false}, false);
      df::PrepareOutputDir(parse_opts.out, parse_opts.force);
      auto summary = df::ParseStage(def, df::Workdir(parse_opts.out), config);
      for (const auto& d : summary.diagnostics) std::cerr << "warning: " << d << "\n";
      std::cout << "parsed " << def.name << ": " << summary.maps << " dialog-act maps, " << summary.vertices
                << " dialogs, " << summary.edges << " transitions\n";
    } else if (*revise) {
      std::optional<df::RevisionDocument> rev;
      if (!revision_path.empty()) rev = df::RevisionDocumentFromJson(df::ReadJsonFile(revision_path));
      df::ReviseStage(df::Workdir(revise_opts.out), rev);
      std::cout << "maps revised\n";
    } else if (*generate) {
      auto config = ResolveConfig(generate_opts, true);
      std::optional<df::Json> ingested;
      if (!paraphrase_path.empty()) ingested = df::ReadJsonFile(paraphrase_path);
      auto summary = df::GenerateStage(df::Workdir(generate_opts.out), config, ingested);
      std::cout << "paraphrases: " << summary.paraphrases << "\n";
      for (const auto& [intent, n] : summary.goals_per_intent) std::cout << "goals " << intent << ": " << n << "\n";
      std::cout << "goals: " << summary.goals << "\n";
    } else if (*simulate) {
      auto config = ResolveConfig(simulate_opts, true);
      if (!endpoint.empty()) config.endpoint = endpoint;
      if (parallelism) config.parallelism = *parallelism;
      auto summary = df::SimulateStage(df::Workdir(simulate_opts.out), config);
      std::cout << df::ToJson(summary.counts).dump() << "\n";
    } else if (*remediate) {
      auto config = ResolveConfig(remediate_opts, true);
      std::vector<df::HistoryEntry> history;
      for (const auto& path : history_reports)
        history.push_back(df::HistoryEntryFromReport(path, df::ReadJsonFile(path)));
      auto report = df::RemediateStage(df::Workdir(remediate_opts.out), config, history);
      std::cout << "completion rate " << report["summary"]["completion_rate"]["point"].get<double>() << ", macro F1 "
                << report["summary"]["macro_f1"]["point"].get<double>() << "\n";
    } else if (*retrain) {
      auto config = ResolveConfig(retrain_opts, true);
      std::optional<std::filesystem::path> eval;
      if (!eval_path.empty()) eval = eval_path;
      auto result = df::RetrainStage(df::Workdir(retrain_opts.out), config, eval);
      std::cout << df::FormatRetrainTable(result);
    } else if (*serve) {
      df::ApiOptions options;
      if (!serve_opts.config.empty()) options.defaults = df::LoadPipelineConfig(serve_opts.config);
      const std::filesystem::path db = db_path.empty() ? EnvOr("DIALOGFORGE_DB", "dialogforge.db") : db_path;
      options.data_dir = data_dir.empty() ? (db.has_parent_path() ? db.parent_path() : std::filesystem::path(".")) : std::filesystem::path(data_dir);
      if (!static_dir.empty()) options.static_dir = static_dir;
      df::SessionStore store(db);
      df::ApiService service(store, options);
      httplib::Server server;
      service.Mount(server);
      return Serve(server, host, port.value_or(std::stoi(EnvOr("DIALOGFORGE_PORT", "8080"))), "dialogforge API");
    } else if (*bot) {
      std::optional<std::filesystem::path> sidecar;
      if (!bot_utterances.empty()) sidecar = bot_utterances;
      auto def = df::LoadBotDefinition(bot_def, sidecar);
      auto config = ResolveConfig({"", bot_opts.config, std::nullopt, false}, false);
      auto runtime = df::MakeRuntime(def, config);
      httplib::Server server;
      df::MountChatRoutes(server, runtime);
      return Serve(server, host, bot_port.value_or(std::stoi(EnvOr("DIALOGFORGE_BOT_PORT", "8081"))), def.name);
    }
  } catch (const df::Error& e) {
    std::cerr << df::ErrorJson(e).dump() << "\n";
    return ExitCode(e);
  } catch (const std::exception& e) {
    std::cerr << df::Json{{"error", {{"code", "InternalError"}, {"message", e.what()}}}}.dump() << "\n";
    return 1;
  }
  return 0;
}
