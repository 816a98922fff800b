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

// Remediation report document.

#ifndef DIALOGFORGE_REMEDIATOR_REPORT_HPP
#define DIALOGFORGE_REMEDIATOR_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "dialogforge/remediator/clustering.hpp"
#include "dialogforge/remediator/paths.hpp"
#include "dialogforge/remediator/suggestions.hpp"

namespace dialogforge {

struct RemediationConfig {
  double move_threshold = kDefaultMoveThreshold;
  double merge_threshold = kDefaultMergeThreshold;
  BootstrapConfig bootstrap;
  std::optional<std::size_t> path_max_length;
  std::size_t max_paths = 100;
};

inline Json ToJson(const RemediationConfig& c) {
  return Json{{"move_threshold", c.move_threshold},
              {"merge_threshold", c.merge_threshold},
              {"bootstrap_iterations", c.bootstrap.iterations},
              {"bootstrap_level", c.bootstrap.level},
              {"bootstrap_seed", c.bootstrap.seed},
              {"path_max_length", c.path_max_length ? Json(*c.path_max_length) : Json(nullptr)},
              {"max_paths", c.max_paths}};
}

/// Headline numbers of one earlier session.
struct HistoryEntry {
  std::string session;
  std::size_t episodes = 0;
  double completion_rate = 0.0;
  double macro_f1 = 0.0;

  bool operator==(const HistoryEntry&) const = default;
};

inline HistoryEntry HistoryEntryFromReport(const std::string& session, const Json& report) {
  try {
    const auto& s = report.at("summary");
    return {session, s.at("episodes").get<std::size_t>(), s.at("completion_rate").at("point").get<double>(),
            s.at("macro_f1").at("point").get<double>()};
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("report summary: ") + e.what());
  }
}

/// History entries in the given order; each carries the change against the
/// entry before it.
inline Json RenderHistory(const std::vector<HistoryEntry>& history) {
  Json out = Json::array();
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& h = history[i];
    Json row{{"session", h.session},
             {"episodes", h.episodes},
             {"completion_rate", h.completion_rate},
             {"macro_f1", h.macro_f1},
             {"delta_completion_rate", nullptr},
             {"delta_macro_f1", nullptr}};
    if (i > 0) {
      row["delta_completion_rate"] = h.completion_rate - history[i - 1].completion_rate;
      row["delta_macro_f1"] = h.macro_f1 - history[i - 1].macro_f1;
    }
    out.push_back(std::move(row));
  }
  return out;
}

/// Everything the report renders, computed from one session's episodes.
struct SessionAnalysis {
  SessionMetrics metrics;
  ConfusionMatrix confusion;
  IntentReport intents;
  std::vector<IntentErrorGroup> groups;
  std::vector<RemediationSuggestion> intent_suggestions;
  std::vector<NerSuggestion> ner_suggestions;
  std::vector<RemediationSuggestion> design_suggestions;
  std::vector<IntentCluster> clusters;
  /// Root cause per failed episode id.
  std::map<std::string, RootCause> root_causes;
  /// Dialog to root-cause category to count.
  std::map<std::string, std::map<std::string, std::size_t>> root_cause_counts;
};

inline SessionAnalysis Analyze(std::span<const EpisodeRecord> episodes, const RemediationConfig& config) {
  SessionAnalysis a;
  a.metrics = Aggregate(episodes);
  a.confusion = ConfusionMatrix::FromEpisodes(episodes);
  a.intents = BuildIntentReport(episodes, config.bootstrap);
  a.groups = GroupIntentErrors(episodes);
  a.intent_suggestions = Suggest(a.groups, config.move_threshold);
  a.ner_suggestions = SuggestNer(episodes);
  a.design_suggestions = SuggestDialogDesign(episodes);
  a.clusters = ClusterConfusion(a.confusion, config.merge_threshold);
  for (const auto& e : episodes)
    if (IsError(e.outcome)) {
      auto cause = BacktrackRootCause(e);
      ++a.root_cause_counts[e.dialog][ToString(cause.category)];
      a.root_causes.emplace(e.goal_id, std::move(cause));
    }
  return a;
}

/// Renders the report. Keys are emitted in sorted order and arrays in
/// deterministic order, so equal inputs give byte-identical documents.
inline Json RenderReport(const SessionAnalysis& a, const RemediationConfig& config,
                         const std::vector<HistoryEntry>& history, const ConversationGraph* graph) {
  Json summary = ToJson(a.metrics.total);
  summary["completion_rate"] = ToJson(a.intents.completion_rate);
  summary["macro_f1"] = ToJson(a.intents.macro_f1);
  summary["dialogs"] = a.metrics.dialogs.size();

  Json dialogs = Json::array();
  for (const auto& [dialog, counts] : a.metrics.dialogs) {
    Json row = ToJson(counts);
    row["dialog"] = dialog;
    row["intent"] = a.metrics.dialog_intents.at(dialog);
    Json causes = Json::object();
    if (auto it = a.root_cause_counts.find(dialog); it != a.root_cause_counts.end())
      for (const auto& [category, n] : it->second) causes[category] = n;
    row["root_causes"] = causes;
    row["design_suggestions"] = Json::array();
    for (const auto& s : a.design_suggestions)
      if (s.dialog == dialog) row["design_suggestions"].push_back(ToJson(s));
    dialogs.push_back(std::move(row));
  }

  Json groups = Json::array();
  for (const auto& g : a.groups) groups.push_back(ToJson(g));
  Json suggestions = Json::array();
  for (const auto& s : a.intent_suggestions) suggestions.push_back(ToJson(s));
  Json ner = Json::array();
  for (const auto& s : a.ner_suggestions) ner.push_back(ToJson(s));

  Json scores = Json::array();
  for (const auto& r : a.intents.rows)
    scores.push_back(Json{{"intent", r.intent},
                          {"precision", ToJson(r.precision)},
                          {"recall", ToJson(r.recall)},
                          {"f1", ToJson(r.f1)},
                          {"support", r.support},
                          {"predicted", r.predicted},
                          {"flagged", r.flagged}});
  Json clusters = Json::array();
  for (const auto& c : a.clusters) clusters.push_back(ToJson(c));
  Json root_causes = Json::object();
  for (const auto& [id, cause] : a.root_causes) root_causes[id] = ToJson(cause);

  Json paths = Json::array();
  if (graph) {
    for (const auto& [dialog, counts] : a.metrics.dialogs) {
      if (!graph->Contains(dialog)) continue;
      for (const auto& target : graph->success_dialogs()) {
        auto result = EnumeratePaths(*graph, dialog, target, config.path_max_length, config.max_paths);
        Json row = ToJson(result);
        row["source"] = dialog;
        row["target"] = target;
        paths.push_back(std::move(row));
      }
    }
  }

  return Json{{"schema_version", kSchemaVersion},
              {"config", ToJson(config)},
              {"history", RenderHistory(history)},
              {"summary", summary},
              {"dialogs", dialogs},
              {"intent_remediation", Json{{"groups", groups}, {"suggestions", suggestions}}},
              {"ner_remediation", ner},
              {"analytics", Json{{"confusion", a.confusion.ToJson()},
                                 {"intent_scores", scores},
                                 {"clusters", clusters},
                                 {"root_causes", root_causes}}},
              {"paths", paths}};
}

inline Json BuildReport(std::span<const EpisodeRecord> episodes, const RemediationConfig& config,
                        const std::vector<HistoryEntry>& history = {}, const ConversationGraph* graph = nullptr) {
  return RenderReport(Analyze(episodes, config), config, history, graph);
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_REMEDIATOR_REPORT_HPP
