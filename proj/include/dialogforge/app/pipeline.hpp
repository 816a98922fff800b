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

// Pipeline stages over a working directory. The CLI and the HTTP service
// both drive these functions, so their artifacts are identical.
//
// Layout:
//   config.json  bot.json  graph.json  maps/<dialog>.json  ontology.json
//   paraphrases.json  goals.jsonl  episodes.jsonl  runtime_log.json
//   report.json  retrain/

#ifndef DIALOGFORGE_APP_PIPELINE_HPP
#define DIALOGFORGE_APP_PIPELINE_HPP

#include <filesystem>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "dialogforge/app/config.hpp"

namespace dialogforge {

DIALOGFORGE_DEFINE_ERROR(StageError);
DIALOGFORGE_DEFINE_ERROR(OutputExists);

enum class Stage { kNone, kParsed, kRevised, kGoalsReady, kSimulated, kRemediated };

inline std::string ToString(Stage s) {
  switch (s) {
    case Stage::kNone: return "none";
    case Stage::kParsed: return "parsed";
    case Stage::kRevised: return "revised";
    case Stage::kGoalsReady: return "goals_ready";
    case Stage::kSimulated: return "simulated";
    case Stage::kRemediated: return "remediated";
  }
  return "none";
}

inline Stage StageFromString(std::string_view s) {
  for (auto stage : {Stage::kNone, Stage::kParsed, Stage::kRevised, Stage::kGoalsReady, Stage::kSimulated,
                     Stage::kRemediated})
    if (ToString(stage) == s) return stage;
  throw SchemaError("unknown stage '" + std::string(s) + "'");
}

class Workdir {
 public:
  explicit Workdir(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path config() const { return root_ / "config.json"; }
  std::filesystem::path bot() const { return root_ / "bot.json"; }
  std::filesystem::path graph() const { return root_ / "graph.json"; }
  std::filesystem::path maps_dir() const { return root_ / "maps"; }
  std::filesystem::path map(const std::string& dialog) const { return maps_dir() / (dialog + ".json"); }
  std::filesystem::path ontology() const { return root_ / "ontology.json"; }
  std::filesystem::path paraphrases() const { return root_ / "paraphrases.json"; }
  std::filesystem::path goals() const { return root_ / "goals.jsonl"; }
  std::filesystem::path episodes() const { return root_ / "episodes.jsonl"; }
  std::filesystem::path runtime_log() const { return root_ / "runtime_log.json"; }
  std::filesystem::path report() const { return root_ / "report.json"; }
  std::filesystem::path retrain_dir() const { return root_ / "retrain"; }

 private:
  std::filesystem::path root_;
};

namespace detail {

inline void Require(const std::filesystem::path& path, std::string_view stage) {
  if (!std::filesystem::exists(path))
    throw StageError("missing " + path.filename().string() + "; run '" + std::string(stage) + "' first");
}

inline void RemoveAll(std::initializer_list<std::filesystem::path> paths) {
  for (const auto& p : paths) std::filesystem::remove_all(p);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Loading

inline BotDefinition LoadWorkdirBot(const Workdir& wd) {
  detail::Require(wd.bot(), "parse");
  return LoadBotDefinition(wd.bot());
}

/// Maps sorted by dialog name.
inline std::vector<DialogActMap> LoadMaps(const Workdir& wd) {
  detail::Require(wd.maps_dir(), "parse");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(wd.maps_dir()))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<DialogActMap> maps;
  for (const auto& f : files) maps.push_back(DialogActMapFromJson(ReadJsonFile(f)));
  return maps;
}

inline Ontology LoadOntology(const Workdir& wd) {
  detail::Require(wd.ontology(), "parse");
  return OntologyFromJson(ReadJsonFile(wd.ontology()));
}

inline ConversationGraph LoadGraph(const Workdir& wd) {
  detail::Require(wd.graph(), "parse");
  return ConversationGraphFromJson(ReadJsonFile(wd.graph()));
}

/// Stage reached by the artifacts present in `wd`.
inline Stage DetectStage(const Workdir& wd) {
  if (!std::filesystem::exists(wd.maps_dir()) || !std::filesystem::exists(wd.bot())) return Stage::kNone;
  const auto maps = LoadMaps(wd);
  if (maps.empty()) return Stage::kNone;
  for (const auto& m : maps)
    if (!m.revised) return Stage::kParsed;
  if (!std::filesystem::exists(wd.goals())) return Stage::kRevised;
  if (!std::filesystem::exists(wd.episodes())) return Stage::kGoalsReady;
  if (!std::filesystem::exists(wd.report())) return Stage::kSimulated;
  return Stage::kRemediated;
}

inline std::vector<GoalIntent> GoalIntents(const BotDefinition& def) {
  std::vector<GoalIntent> out;
  for (const auto& i : def.intents) out.push_back({i.name, i.entry_dialog});
  return out;
}

inline std::map<std::string, std::string> EntryDialogIntents(const BotDefinition& def) {
  std::map<std::string, std::string> out;
  for (const auto& i : def.intents) out.emplace(i.entry_dialog, i.name);
  return out;
}

// ---------------------------------------------------------------------------
// Stages

struct ParseSummary {
  std::size_t maps = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::vector<std::string> diagnostics;
};

/// Prepares `root` for a fresh parse: refuses a non-empty directory unless
/// `force`, in which case it is cleared.
inline void PrepareOutputDir(const std::filesystem::path& root, bool force) {
  if (std::filesystem::exists(root) && !std::filesystem::is_empty(root)) {
    if (!force) throw OutputExists("output directory '" + root.string() + "' is not empty; pass --force to overwrite");
    std::filesystem::remove_all(root);
  }
  std::filesystem::create_directories(root);
}

/// Writes the canonical bot, graph, aggregated maps and ontology.
inline ParseSummary ParseStage(const BotDefinition& def, const Workdir& wd, const PipelineConfig& config) {
  auto parsed = ParseBot(def);
  WriteJsonFile(wd.config(), ToJson(config));
  WriteJsonFile(wd.bot(), ToJson(def));
  WriteJsonFile(wd.graph(), ToJson(parsed.graph));
  for (const auto& m : parsed.maps) WriteJsonFile(wd.map(m.dialog), ToJson(m));
  WriteJsonFile(wd.ontology(), ToJson(ExtractOntology(def, parsed.maps, config.StageSeed("ontology"), config.ontology)));
  return {parsed.maps.size(), parsed.graph.vertices().size(), parsed.graph.edges().size(), parsed.diagnostics};
}

namespace detail {

inline void RequireStageAtMost(const Workdir& wd, Stage limit, std::string_view action) {
  if (DetectStage(wd) > limit)
    throw StageError("cannot " + std::string(action) + ": goals were already generated from the current maps");
}

}  // namespace detail

/// Applies a revision document (none: confirm as is) and marks every map
/// revised. The human step between parse and generate.
inline void ReviseStage(const Workdir& wd, const std::optional<RevisionDocument>& revision) {
  if (DetectStage(wd) == Stage::kNone) throw StageError("no parsed maps; run 'parse' first");
  detail::RequireStageAtMost(wd, Stage::kRevised, "revise");
  auto maps = LoadMaps(wd);
  auto ontology = LoadOntology(wd);
  ApplyRevisions(maps, ontology, revision.value_or(RevisionDocument{}));
  for (const auto& m : maps) WriteJsonFile(wd.map(m.dialog), ToJson(m));
  WriteJsonFile(wd.ontology(), ToJson(ontology));
}

/// Replaces the maps with edited versions, as submitted by a reviewer. The
/// set of dialogs must not change.
inline void ReplaceMaps(const Workdir& wd, const std::vector<DialogActMap>& maps) {
  if (DetectStage(wd) == Stage::kNone) throw StageError("no parsed maps; run 'parse' first");
  detail::RequireStageAtMost(wd, Stage::kRevised, "replace maps");
  std::set<std::string> existing, submitted;
  for (const auto& m : LoadMaps(wd)) existing.insert(m.dialog);
  for (const auto& m : maps)
    if (!submitted.insert(m.dialog).second) throw UnknownTarget("map for dialog '" + m.dialog + "' submitted twice");
  if (existing != submitted) throw UnknownTarget("submitted maps must cover exactly the parsed dialogs");
  for (const auto& m : maps) WriteJsonFile(wd.map(m.dialog), ToJson(m));
}

inline void ReplaceOntology(const Workdir& wd, const Ontology& ontology) {
  if (DetectStage(wd) == Stage::kNone) throw StageError("no parsed maps; run 'parse' first");
  detail::RequireStageAtMost(wd, Stage::kRevised, "replace the ontology");
  WriteJsonFile(wd.ontology(), ToJson(ontology));
}

struct GenerateSummary {
  std::size_t paraphrases = 0;
  std::map<std::string, std::size_t> goals_per_intent;
  std::size_t goals = 0;
};

/// Paraphrases (rule-based or ingested) and goals. Refuses unrevised maps.
/// Downstream artifacts are removed.
inline GenerateSummary GenerateStage(const Workdir& wd, const PipelineConfig& config,
                                     const std::optional<Json>& ingested = std::nullopt) {
  if (DetectStage(wd) == Stage::kNone) throw StageError("no parsed maps; run 'parse' first");
  const auto def = LoadWorkdirBot(wd);
  const auto maps = LoadMaps(wd);
  for (const auto& m : maps)
    if (!m.revised)
      throw UnrevisedMapError("dialog-act map of '" + m.dialog + "' has not been revised; review it and run 'revise'");
  const auto ontology = LoadOntology(wd);

  GenerateSummary summary;
  QueryPool pool;
  if (config.goal_source == GoalSource::kParaphrases) {
    ParaphraseSet set;
    if (ingested) {
      set = IngestParaphrases(*ingested);
    } else if (config.paraphrase_mode == ParaphraseMode::kIngest) {
      if (!config.paraphrase_file) throw ConfigError("/paraphrase/file: required in ingest mode");
      set = IngestParaphrases(ReadJsonFile(*config.paraphrase_file));
    } else {
      auto pc = DefaultParaphraseConfig(config.StageSeed("paraphrase"));
      pc.max_variants = config.max_variants;
      set = GenerateParaphrases(def.intents, pc);
    }
    summary.paraphrases = set.Count();
    WriteJsonFile(wd.paraphrases(), ToJson(set));
    pool = QueriesFromParaphrases(set);
  } else {
    std::filesystem::remove(wd.paraphrases());
    pool = QueriesFromUtterances(def.intents);
  }
  auto goals = GenerateGoals(maps, ontology, GoalIntents(def), pool, config.per_intent_cap, config.StageSeed("goals"));
  detail::RemoveAll({wd.episodes(), wd.runtime_log(), wd.report(), wd.retrain_dir()});
  WriteFile(wd.goals(), GoalsToJsonLines(goals));
  for (const auto& g : goals) ++summary.goals_per_intent[g.intent];
  summary.goals = goals.size();
  return summary;
}

/// Runtime trained on the bot's own utterances.
inline BotRuntime MakeRuntime(const BotDefinition& def, const PipelineConfig& config,
                              std::optional<ErrorInjectionConfig> injection = std::nullopt) {
  return BotRuntime(def, IntentModel::Train(def.intents, config.intent_confidence_threshold),
                    injection.value_or(config.injection));
}

struct SimulateSummary {
  OutcomeCounts counts;
  std::size_t injections = 0;
};

/// Simulates every goal against the configured endpoint, or the embedded
/// runtime when none is configured. `client` overrides both.
inline SimulateSummary SimulateStage(const Workdir& wd, const PipelineConfig& config, ChatClient* client = nullptr) {
  detail::Require(wd.goals(), "generate");
  const auto def = LoadWorkdirBot(wd);
  const auto maps = LoadMaps(wd);
  const auto goals = ReadGoalsFile(wd.goals());
  const auto templates = ResponseTemplateSet::Default();

  SimulateSummary summary;
  std::vector<EpisodeRecord> episodes;
  Json log;
  if (client) {
    episodes = RunSimulation(goals, maps, templates, *client, config.Simulation(), EntryDialogIntents(def));
    log = Json{{"endpoint", "external"}};
  } else if (config.endpoint) {
    HttpChatClient http(*config.endpoint);
    episodes = RunSimulation(goals, maps, templates, http, config.Simulation(), EntryDialogIntents(def));
    log = Json{{"endpoint", *config.endpoint}};
  } else {
    auto runtime = MakeRuntime(def, config);
    InProcessChatClient in_process(runtime);
    episodes = RunSimulation(goals, maps, templates, in_process, config.Simulation(), EntryDialogIntents(def));
    log = runtime.LogToJson();
    summary.injections = runtime.injections().size();
  }
  detail::RemoveAll({wd.report(), wd.retrain_dir()});
  WriteFile(wd.episodes(), EpisodesToJsonLines(episodes));
  WriteJsonFile(wd.runtime_log(), log);
  for (const auto& e : episodes) summary.counts.Add(e);
  return summary;
}

inline Json RemediateStage(const Workdir& wd, const PipelineConfig& config,
                           const std::vector<HistoryEntry>& history = {}) {
  detail::Require(wd.episodes(), "simulate");
  const auto episodes = ReadEpisodesFile(wd.episodes());
  const auto graph = LoadGraph(wd);
  auto report = BuildReport(episodes, config.Remediation(), history, &graph);
  WriteJsonFile(wd.report(), report);
  return report;
}

// ---------------------------------------------------------------------------
// Retraining

struct RetrainRow {
  std::string intent;
  IntentReportRow baseline;
  IntentReportRow retrained;
  std::size_t added = 0;
};

struct RetrainResult {
  std::vector<RetrainRow> rows;
  Interval baseline_macro_f1;
  Interval retrained_macro_f1;
  std::size_t failing_queries = 0;
  std::size_t eval_goals = 0;
};

/// Training sets extended with the queries whose episodes ended in an
/// intent error, each added to its true intent once.
inline std::map<std::string, std::vector<std::string>> AugmentTrainingSets(
    const std::vector<IntentDefinition>& intents, std::span<const EpisodeRecord> episodes,
    std::size_t* added_total = nullptr) {
  std::map<std::string, std::vector<std::string>> out;
  std::map<std::string, std::set<std::string>> seen;
  for (const auto& i : intents) {
    out[i.name] = i.training_utterances;
    for (const auto& u : i.training_utterances) seen[i.name].insert(NormalizeUtterance(u));
  }
  std::size_t added = 0;
  for (const auto& e : episodes) {
    if (!IsIntentError(e) || !out.contains(e.intent)) continue;
    if (seen[e.intent].insert(NormalizeUtterance(e.intent_query)).second) {
      out[e.intent].push_back(e.intent_query);
      ++added;
    }
  }
  if (added_total) *added_total = added;
  return out;
}

inline Json ToJson(const RetrainResult& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"intent", row.intent},
                        {"added_utterances", row.added},
                        {"support", row.baseline.support},
                        {"baseline_f1", ToJson(row.baseline.f1)},
                        {"retrained_f1", ToJson(row.retrained.f1)},
                        {"delta_f1", row.retrained.f1.point - row.baseline.f1.point}});
  return Json{{"intents", rows},
              {"baseline_macro_f1", ToJson(r.baseline_macro_f1)},
              {"retrained_macro_f1", ToJson(r.retrained_macro_f1)},
              {"failing_queries", r.failing_queries},
              {"eval_goals", r.eval_goals}};
}

/// Fixed-width before/after table with intervals as point±half-width.
inline std::string FormatRetrainTable(const RetrainResult& r) {
  auto cell = [](const Interval& i) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << i.point << "±" << std::setprecision(2)
      << std::max(i.high - i.point, i.point - i.low);
    return s.str();
  };
  std::ostringstream out;
  out << std::left << std::setw(28) << "intent" << std::setw(10) << "added" << std::setw(14) << "baseline F1"
      << std::setw(14) << "retrained F1" << "\n";
  for (const auto& row : r.rows)
    out << std::left << std::setw(28) << row.intent << std::setw(10) << row.added << std::setw(15)
        << cell(row.baseline.f1) << std::setw(15) << cell(row.retrained.f1) << "\n";
  out << std::left << std::setw(28) << "macro" << std::setw(10) << r.failing_queries << std::setw(15)
      << cell(r.baseline_macro_f1) << std::setw(15) << cell(r.retrained_macro_f1) << "\n";
  return out.str();
}

/// Augments the training sets with the failing queries of the simulated
/// episodes, retrains the intent model and compares both models on goals
/// built from held-out utterances, without error injection.
inline RetrainResult RetrainStage(const Workdir& wd, const PipelineConfig& config,
                                  const std::optional<std::filesystem::path>& eval_path = std::nullopt) {
  detail::Require(wd.episodes(), "simulate");
  const auto def = LoadWorkdirBot(wd);
  const auto maps = LoadMaps(wd);
  const auto ontology = LoadOntology(wd);
  const auto episodes = ReadEpisodesFile(wd.episodes());

  std::optional<std::filesystem::path> source = eval_path;
  if (!source && config.eval_utterances) source = *config.eval_utterances;
  if (!source) throw ConfigError("/retrain/eval_utterances: held-out utterances are required for retraining");
  const Json eval_doc = ReadJsonFile(*source);
  if (!eval_doc.is_object()) throw SchemaError("eval utterances: expected object intent -> list");
  std::vector<IntentDefinition> eval_intents;
  for (const auto& i : def.intents) {
    IntentDefinition e{i.name, i.entry_dialog, {}};
    if (eval_doc.contains(i.name)) e.training_utterances = detail::SchemaReader::StringList(eval_doc[i.name], "/" + i.name);
    eval_intents.push_back(std::move(e));
  }
  for (const auto& [name, _] : eval_doc.items())
    if (!def.FindIntent(name)) throw ValidationError({{"UnknownIntent", "/" + name, "eval utterances name undeclared intent"}});

  RetrainResult result;
  const auto augmented = AugmentTrainingSets(def.intents, episodes, &result.failing_queries);
  const auto baseline_model = IntentModel::Train(def.intents, config.intent_confidence_threshold);
  const auto retrained_model = IntentModel::Train(augmented, config.intent_confidence_threshold);

  const auto goals = GenerateGoals(maps, ontology, GoalIntents(def), QueriesFromUtterances(eval_intents),
                                   config.eval_per_intent_cap, config.StageSeed("retrain"));
  result.eval_goals = goals.size();
  const auto templates = ResponseTemplateSet::Default();
  auto evaluate = [&](const IntentModel& model) {
    BotRuntime runtime(def, model, ErrorInjectionConfig{});
    InProcessChatClient client(runtime);
    auto eval_episodes = RunSimulation(goals, maps, templates, client, config.Simulation(), EntryDialogIntents(def));
    auto bootstrap = config.Remediation().bootstrap;
    bootstrap.seed = config.StageSeed("retrain-bootstrap");
    return std::make_pair(eval_episodes, BuildIntentReport(eval_episodes, bootstrap));
  };
  const auto [before_episodes, before] = evaluate(baseline_model);
  const auto [after_episodes, after] = evaluate(retrained_model);

  std::map<std::string, std::size_t> added;
  for (const auto& i : def.intents) added[i.name] = augmented.at(i.name).size() - i.training_utterances.size();
  for (const auto& row : before.rows) {
    auto it = std::find_if(after.rows.begin(), after.rows.end(), [&](const auto& r) { return r.intent == row.intent; });
    if (it == after.rows.end()) continue;
    result.rows.push_back({row.intent, row, *it, added.contains(row.intent) ? added[row.intent] : 0});
  }
  result.baseline_macro_f1 = before.macro_f1;
  result.retrained_macro_f1 = after.macro_f1;

  Json augmented_doc = Json::object();
  for (const auto& [intent, list] : augmented) augmented_doc[intent] = list;
  WriteJsonFile(wd.retrain_dir() / "augmented_intents.json", augmented_doc);
  WriteJsonFile(wd.retrain_dir() / "model_baseline.json", baseline_model.ToJson());
  WriteJsonFile(wd.retrain_dir() / "model_retrained.json", retrained_model.ToJson());
  WriteFile(wd.retrain_dir() / "eval_goals.jsonl", GoalsToJsonLines(goals));
  WriteFile(wd.retrain_dir() / "eval_episodes_baseline.jsonl", EpisodesToJsonLines(before_episodes));
  WriteFile(wd.retrain_dir() / "eval_episodes_retrained.jsonl", EpisodesToJsonLines(after_episodes));
  WriteJsonFile(wd.retrain_dir() / "comparison.json", ToJson(result));
  return result;
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_APP_PIPELINE_HPP
