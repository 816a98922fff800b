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

// Intent-error grouping and remediation suggestions.

#ifndef DIALOGFORGE_REMEDIATOR_SUGGESTIONS_HPP
#define DIALOGFORGE_REMEDIATOR_SUGGESTIONS_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dialogforge/remediator/root_cause.hpp"

namespace dialogforge {

inline constexpr double kDefaultMoveThreshold = 0.5;

/// Intent errors of the paraphrases of one origin utterance.
struct IntentErrorGroup {
  std::string intent;
  std::string dialog;
  std::string origin_utterance;
  std::vector<std::string> episode_ids;
  std::vector<std::string> paraphrases;
  /// Predicted label (another intent or fallback) to count.
  std::map<std::string, std::size_t> predicted;

  std::size_t error_count() const { return episode_ids.size(); }
};

inline Json ToJson(const IntentErrorGroup& g) {
  return Json{{"intent", g.intent},
              {"dialog", g.dialog},
              {"origin_utterance", g.origin_utterance},
              {"error_count", g.error_count()},
              {"episode_ids", g.episode_ids},
              {"paraphrases", g.paraphrases},
              {"predicted", g.predicted}};
}

/// Groups intent errors by (intent, origin utterance); episodes built from
/// original utterances are their own origin. Sorted by error count
/// descending, then by intent and origin.
inline std::vector<IntentErrorGroup> GroupIntentErrors(std::span<const EpisodeRecord> episodes) {
  std::map<std::pair<std::string, std::string>, IntentErrorGroup> groups;
  for (const auto& e : episodes) {
    if (!IsIntentError(e)) continue;
    const std::string origin = e.origin_utterance.value_or(e.intent_query);
    auto& g = groups[{e.intent, origin}];
    g.intent = e.intent;
    g.dialog = e.dialog;
    g.origin_utterance = origin;
    g.episode_ids.push_back(e.goal_id);
    g.paraphrases.push_back(e.intent_query);
    ++g.predicted[*PredictedLabel(e)];
  }
  std::vector<IntentErrorGroup> out;
  for (auto& [key, g] : groups) out.push_back(std::move(g));
  std::stable_sort(out.begin(), out.end(), [](const IntentErrorGroup& a, const IntentErrorGroup& b) {
    return a.error_count() > b.error_count();
  });
  return out;
}

enum class SuggestionKind { kAugmentTrainingSet, kMoveUtterance, kReviewDialogDesign };

inline std::string ToString(SuggestionKind k) {
  switch (k) {
    case SuggestionKind::kAugmentTrainingSet: return "augment_training_set";
    case SuggestionKind::kMoveUtterance: return "move_utterance";
    case SuggestionKind::kReviewDialogDesign: return "review_dialog_design";
  }
  return "augment_training_set";
}

struct RemediationSuggestion {
  SuggestionKind kind = SuggestionKind::kAugmentTrainingSet;
  std::string intent;
  std::string dialog;
  std::string origin_utterance;
  std::optional<std::string> target_intent;
  std::vector<std::string> episode_ids;
  std::vector<std::string> paraphrases;
  std::map<std::string, std::size_t> predicted;
  std::string rationale;
};

inline Json ToJson(const RemediationSuggestion& s) {
  return Json{{"kind", ToString(s.kind)},
              {"intent", s.intent},
              {"dialog", s.dialog},
              {"origin_utterance", s.origin_utterance},
              {"target_intent", s.target_intent ? Json(*s.target_intent) : Json(nullptr)},
              {"evidence", Json{{"episode_ids", s.episode_ids}, {"paraphrases", s.paraphrases}, {"predicted", s.predicted}}},
              {"rationale", s.rationale}};
}

namespace detail {

inline std::string Percent(std::size_t part, std::size_t whole) {
  return std::to_string(whole ? (100 * part + whole / 2) / whole : 0) + "%";
}

}  // namespace detail

/// One suggestion per group, in group order. A group whose errors land on
/// a single other intent more than `move_threshold` of the time suggests
/// moving the utterance there; a fallback plurality marks the queries as
/// out-of-domain for the model and suggests adding them to the training
/// set, as does a mixed confusion.
inline std::vector<RemediationSuggestion> Suggest(const std::vector<IntentErrorGroup>& groups,
                                                  double move_threshold = kDefaultMoveThreshold) {
  std::vector<RemediationSuggestion> out;
  for (const auto& g : groups) {
    RemediationSuggestion s;
    s.intent = g.intent;
    s.dialog = g.dialog;
    s.origin_utterance = g.origin_utterance;
    s.episode_ids = g.episode_ids;
    s.paraphrases = g.paraphrases;
    s.predicted = g.predicted;
    const std::size_t total = g.error_count();

    std::optional<std::string> top;
    std::size_t top_count = 0;
    std::size_t fallback = 0;
    for (const auto& [label, count] : g.predicted) {
      if (label == kFallbackLabel) {
        fallback = count;
      } else if (count > top_count) {
        top = label;
        top_count = count;
      }
    }
    if (top && static_cast<double>(top_count) > move_threshold * static_cast<double>(total)) {
      s.kind = SuggestionKind::kMoveUtterance;
      s.target_intent = top;
      s.rationale = detail::Percent(top_count, total) + " of the failing paraphrases were classified as '" + *top +
                    "'; consider moving the utterance to that intent or making the two intents more distinct";
    } else if (fallback > 0 && fallback >= top_count) {
      s.kind = SuggestionKind::kAugmentTrainingSet;
      s.rationale = detail::Percent(fallback, total) +
                    " of the failing paraphrases fell back as out-of-domain; add them to the training set of '" +
                    g.intent + "'";
    } else {
      s.kind = SuggestionKind::kAugmentTrainingSet;
      s.rationale = "failing paraphrases are spread over " + std::to_string(g.predicted.size()) +
                    " predictions; add them to the training set of '" + g.intent + "'";
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Re-requested entity of one dialog with the values the bot failed to
/// extract.
struct NerSuggestion {
  std::string dialog;
  std::string entity;
  std::vector<std::string> episode_ids;
  std::vector<std::string> failing_values;
};

inline Json ToJson(const NerSuggestion& s) {
  return Json{{"dialog", s.dialog},
              {"entity", s.entity},
              {"error_count", s.episode_ids.size()},
              {"episode_ids", s.episode_ids},
              {"failing_values", s.failing_values}};
}

inline std::vector<NerSuggestion> SuggestNer(std::span<const EpisodeRecord> episodes) {
  std::map<std::pair<std::string, std::string>, NerSuggestion> by_key;
  for (const auto& e : episodes) {
    if (Classify(e) != ErrorClass::kNerError) continue;
    auto cause = BacktrackRootCause(e);
    if (!cause.slot) continue;
    auto& s = by_key[{e.dialog, *cause.slot}];
    s.dialog = e.dialog;
    s.entity = *cause.slot;
    s.episode_ids.push_back(e.goal_id);
    if (auto it = e.informed.find(*cause.slot); it != e.informed.end()) s.failing_values.push_back(it->second);
  }
  std::vector<NerSuggestion> out;
  for (auto& [key, s] : by_key) out.push_back(std::move(s));
  std::stable_sort(out.begin(), out.end(), [](const NerSuggestion& a, const NerSuggestion& b) {
    return a.episode_ids.size() > b.episode_ids.size();
  });
  return out;
}

/// Dialog-design review items: unmapped bot messages and other
/// non-intent, non-NER failures, grouped per dialog and explanation.
inline std::vector<RemediationSuggestion> SuggestDialogDesign(std::span<const EpisodeRecord> episodes) {
  std::map<std::pair<std::string, std::string>, RemediationSuggestion> by_key;
  for (const auto& e : episodes) {
    if (Classify(e) != ErrorClass::kOtherError) continue;
    auto cause = BacktrackRootCause(e);
    auto& s = by_key[{e.dialog, cause.explanation}];
    s.kind = SuggestionKind::kReviewDialogDesign;
    s.intent = e.intent;
    s.dialog = e.dialog;
    s.origin_utterance = e.origin_utterance.value_or(e.intent_query);
    s.episode_ids.push_back(e.goal_id);
    s.paraphrases.push_back(e.intent_query);
    s.rationale = cause.category == RootCauseCategory::kUnmappedMessage
                      ? "add the unmatched bot message to the dialog-act map or revise the dialog: " + cause.explanation
                      : "review the design of dialog '" + e.dialog + "': " + cause.explanation;
  }
  std::vector<RemediationSuggestion> out;
  for (auto& [key, s] : by_key) out.push_back(std::move(s));
  std::stable_sort(out.begin(), out.end(), [](const RemediationSuggestion& a, const RemediationSuggestion& b) {
    return a.episode_ids.size() > b.episode_ids.size();
  });
  return out;
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_REMEDIATOR_SUGGESTIONS_HPP
