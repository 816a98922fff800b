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

// Session metrics, the intent confusion matrix and per-intent scores.

#ifndef DIALOGFORGE_REMEDIATOR_METRICS_HPP
#define DIALOGFORGE_REMEDIATOR_METRICS_HPP

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dialogforge/remediator/bootstrap.hpp"
#include "dialogforge/simulator/episode.hpp"

namespace dialogforge {

inline constexpr std::string_view kFallbackLabel = "fallback";

/// Intent the bot acted on in `e`: the dialog whose intent_success_message
/// it produced, the goal intent for successful episodes that never showed
/// one, and fallback otherwise. Aborted episodes have no label.
inline std::optional<std::string> PredictedLabel(const EpisodeRecord& e) {
  if (e.outcome == Outcome::kAborted) return std::nullopt;
  if (e.predicted_intent) return *e.predicted_intent;
  if (e.outcome == Outcome::kSuccess) return e.intent;
  return std::string(kFallbackLabel);
}

inline bool IsIntentError(const EpisodeRecord& e) {
  auto label = PredictedLabel(e);
  return label && *label != e.intent;
}

enum class ErrorClass { kSuccess, kIntentError, kNerError, kOtherError, kAborted };

/// Metric bucket of an episode. Misrouted and fallen-back intent queries
/// count as intent errors whatever turn they surfaced in.
inline ErrorClass Classify(const EpisodeRecord& e) {
  if (e.outcome == Outcome::kAborted) return ErrorClass::kAborted;
  if (e.outcome == Outcome::kSuccess) return ErrorClass::kSuccess;
  if (IsIntentError(e)) return ErrorClass::kIntentError;
  if (e.outcome == Outcome::kNerError) return ErrorClass::kNerError;
  return ErrorClass::kOtherError;
}

struct OutcomeCounts {
  std::size_t episodes = 0;
  std::size_t successes = 0;
  std::size_t intent_errors = 0;
  std::size_t ner_errors = 0;
  std::size_t other_errors = 0;
  std::size_t aborted = 0;

  std::size_t completed() const { return episodes - aborted; }
  double completion_rate() const {
    return completed() == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(completed());
  }
  void Add(const EpisodeRecord& e) {
    ++episodes;
    switch (Classify(e)) {
      case ErrorClass::kSuccess: ++successes; break;
      case ErrorClass::kIntentError: ++intent_errors; break;
      case ErrorClass::kNerError: ++ner_errors; break;
      case ErrorClass::kOtherError: ++other_errors; break;
      case ErrorClass::kAborted: ++aborted; break;
    }
  }
  bool operator==(const OutcomeCounts&) const = default;
};

inline Json ToJson(const OutcomeCounts& c) {
  return Json{{"episodes", c.episodes},       {"successes", c.successes},     {"intent_errors", c.intent_errors},
              {"ner_errors", c.ner_errors},   {"other_errors", c.other_errors}, {"aborted", c.aborted},
              {"completion_rate", c.completion_rate()}};
}

struct SessionMetrics {
  /// Keyed by goal dialog.
  std::map<std::string, OutcomeCounts> dialogs;
  std::map<std::string, std::string> dialog_intents;
  OutcomeCounts total;
};

inline SessionMetrics Aggregate(std::span<const EpisodeRecord> episodes) {
  SessionMetrics m;
  for (const auto& e : episodes) {
    m.dialogs[e.dialog].Add(e);
    m.dialog_intents.emplace(e.dialog, e.intent);
    m.total.Add(e);
  }
  return m;
}

inline SessionMetrics Aggregate(const std::vector<EpisodeRecord>& episodes) {
  return Aggregate(std::span<const EpisodeRecord>(episodes));
}

// ---------------------------------------------------------------------------
// Confusion

/// Rows: true intents. Columns: the same intents followed by fallback.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<std::string> labels)
      : labels_(std::move(labels)), counts_(labels_.size(), std::vector<std::size_t>(labels_.size() + 1, 0)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) index_[labels_[i]] = i;
  }

  /// Labels from the episodes' true and predicted intents, sorted.
  static ConfusionMatrix FromEpisodes(std::span<const EpisodeRecord> episodes) {
    std::set<std::string> labels;
    for (const auto& e : episodes) {
      if (e.outcome == Outcome::kAborted) continue;
      labels.insert(e.intent);
      if (auto p = PredictedLabel(e); p && *p != kFallbackLabel) labels.insert(*p);
    }
    ConfusionMatrix m(std::vector<std::string>(labels.begin(), labels.end()));
    for (const auto& e : episodes)
      if (auto p = PredictedLabel(e)) m.Add(e.intent, *p);
    return m;
  }

  void Add(const std::string& truth, const std::string& predicted, std::size_t count = 1) {
    counts_.at(index_.at(truth)).at(Column(predicted)) += count;
  }

  std::size_t Column(const std::string& predicted) const {
    if (predicted == kFallbackLabel) return labels_.size();
    return index_.at(predicted);
  }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t fallback_column() const noexcept { return labels_.size(); }
  std::size_t at(std::size_t row, std::size_t column) const { return counts_.at(row).at(column); }
  std::size_t& at(std::size_t row, std::size_t column) { return counts_.at(row).at(column); }

  std::size_t RowSum(std::size_t row) const {
    std::size_t s = 0;
    for (auto c : counts_.at(row)) s += c;
    return s;
  }
  std::size_t ColumnSum(std::size_t column) const {
    std::size_t s = 0;
    for (const auto& row : counts_) s += row.at(column);
    return s;
  }
  /// Off-diagonal intent-to-intent mass plus the fallback column.
  std::size_t ErrorMass() const {
    std::size_t s = 0;
    for (std::size_t r = 0; r < size(); ++r) s += RowSum(r) - counts_[r][r];
    return s;
  }
  bool Empty() const {
    for (std::size_t r = 0; r < size(); ++r)
      if (RowSum(r)) return false;
    return true;
  }

  Json ToJson() const {
    auto columns = labels_;
    columns.emplace_back(kFallbackLabel);
    return Json{{"labels", labels_}, {"columns", columns}, {"matrix", counts_}};
  }

  bool operator==(const ConfusionMatrix& o) const { return labels_ == o.labels_ && counts_ == o.counts_; }

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<std::size_t>> counts_;
  std::map<std::string, std::size_t> index_;
};

struct IntentScore {
  std::string intent;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  std::size_t predicted = 0;
  std::size_t true_positives = 0;
  /// No support and never predicted: scores are convention zeros.
  bool flagged = false;
};

/// Standard precision, recall and F1 per intent; a zero denominator gives
/// zero.
inline std::vector<IntentScore> IntentScores(const ConfusionMatrix& confusion) {
  std::vector<IntentScore> out;
  for (std::size_t i = 0; i < confusion.size(); ++i) {
    IntentScore s;
    s.intent = confusion.labels()[i];
    s.true_positives = confusion.at(i, i);
    s.support = confusion.RowSum(i);
    s.predicted = confusion.ColumnSum(i);
    s.precision = s.predicted ? static_cast<double>(s.true_positives) / static_cast<double>(s.predicted) : 0.0;
    s.recall = s.support ? static_cast<double>(s.true_positives) / static_cast<double>(s.support) : 0.0;
    s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    s.flagged = s.support == 0 && s.predicted == 0;
    out.push_back(std::move(s));
  }
  return out;
}

inline double MacroF1(const std::vector<IntentScore>& scores) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : scores) {
    if (s.support == 0) continue;
    sum += s.f1;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

struct IntentReportRow {
  std::string intent;
  Interval precision;
  Interval recall;
  Interval f1;
  std::size_t support = 0;
  std::size_t predicted = 0;
  bool flagged = false;
};

struct IntentReport {
  std::vector<IntentReportRow> rows;
  Interval macro_f1;
  Interval completion_rate;
};

/// Per-intent precision/recall/F1 with bootstrap intervals over episodes,
/// plus macro-F1 and task completion rate intervals.
inline IntentReport BuildIntentReport(std::span<const EpisodeRecord> episodes, const BootstrapConfig& config) {
  const auto confusion = ConfusionMatrix::FromEpisodes(episodes);
  struct Item {
    std::uint32_t truth;
    std::uint32_t predicted;
    bool success;
  };
  std::vector<Item> items;
  for (const auto& e : episodes)
    if (auto p = PredictedLabel(e))
      items.push_back({static_cast<std::uint32_t>(confusion.Column(e.intent)),
                       static_cast<std::uint32_t>(confusion.Column(*p)), e.outcome == Outcome::kSuccess});
  const std::size_t n = confusion.size();
  auto statistic = [n](std::span<const Item> sample) {
    std::vector<std::size_t> tp(n, 0), support(n, 0), predicted(n + 1, 0);
    std::size_t successes = 0;
    for (const auto& it : sample) {
      ++support[it.truth];
      ++predicted[it.predicted];
      if (it.truth == it.predicted) ++tp[it.truth];
      successes += it.success;
    }
    std::vector<double> out;
    out.reserve(3 * n + 2);
    double macro = 0.0;
    std::size_t macro_n = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double p = predicted[i] ? static_cast<double>(tp[i]) / static_cast<double>(predicted[i]) : 0.0;
      double r = support[i] ? static_cast<double>(tp[i]) / static_cast<double>(support[i]) : 0.0;
      double f = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
      out.push_back(p);
      out.push_back(r);
      out.push_back(f);
      if (support[i]) {
        macro += f;
        ++macro_n;
      }
    }
    out.push_back(macro_n ? macro / static_cast<double>(macro_n) : 0.0);
    out.push_back(sample.empty() ? 0.0 : static_cast<double>(successes) / static_cast<double>(sample.size()));
    return out;
  };
  auto intervals = BootstrapIntervals<Item>(std::span<const Item>(items), statistic, config);
  const auto scores = IntentScores(confusion);

  IntentReport report;
  for (std::size_t i = 0; i < n; ++i) {
    report.rows.push_back({scores[i].intent, intervals[3 * i], intervals[3 * i + 1], intervals[3 * i + 2],
                           scores[i].support, scores[i].predicted, scores[i].flagged});
  }
  report.macro_f1 = intervals[3 * n];
  report.completion_rate = intervals[3 * n + 1];
  return report;
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_REMEDIATOR_METRICS_HPP
