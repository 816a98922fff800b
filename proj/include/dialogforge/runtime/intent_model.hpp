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

// TF-IDF nearest-neighbour intent classifier with an exact-match table for
// training utterances.

#ifndef DIALOGFORGE_RUNTIME_INTENT_MODEL_HPP
#define DIALOGFORGE_RUNTIME_INTENT_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dialogforge/bot_schema.hpp"

namespace dialogforge {

DIALOGFORGE_DEFINE_ERROR(EmptyTrainingSet);

inline constexpr double kDefaultConfidenceThreshold = 0.2;

inline std::vector<std::string> ClassifierTokens(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char ch : text) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (ch != '\'' && !current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

struct Classification {
  /// Empty when the query falls back.
  std::optional<std::string> intent;
  double confidence = 0.0;
};

class IntentModel {
 public:
  IntentModel() = default;

  /// Trains on `intents` (name -> utterances). Deterministic in its input.
  static IntentModel Train(const std::map<std::string, std::vector<std::string>>& intents,
                           double confidence_threshold = kDefaultConfidenceThreshold) {
    if (intents.empty()) throw EmptyTrainingSet("no intents to train on");
    IntentModel model;
    model.threshold_ = confidence_threshold;
    model.training_ = intents;

    std::map<std::string, std::set<std::string>> owners;
    std::size_t documents = 0;
    std::map<std::string, std::size_t> df;
    for (const auto& [intent, utterances] : intents) {
      if (utterances.empty()) throw EmptyTrainingSet("intent '" + intent + "' has no utterances");
      model.intents_.push_back(intent);
      for (const auto& u : utterances) {
        owners[NormalizeUtterance(u)].insert(intent);
        auto tokens = ClassifierTokens(u);
        std::set<std::string> unique(tokens.begin(), tokens.end());
        for (const auto& t : unique) ++df[t];
        ++documents;
      }
    }
    for (const auto& [utterance, names] : owners) {
      if (names.size() == 1) {
        model.exact_[utterance] = *names.begin();
      } else {
        model.warnings_.push_back("utterance '" + utterance + "' is shared by " + Join({names.begin(), names.end()}, ", ") +
                                  "; classification falls back to tie-breaking");
      }
    }
    std::size_t index = 0;
    for (const auto& [term, count] : df) {
      model.vocabulary_[term] = index++;
      model.idf_.push_back(std::log((1.0 + documents) / (1.0 + count)) + 1.0);
    }
    for (std::size_t c = 0; c < model.intents_.size(); ++c)
      for (const auto& u : intents.at(model.intents_[c])) {
        auto v = model.Vectorize(u);
        if (!v.empty()) model.documents_.push_back({c, std::move(v)});
      }
    return model;
  }

  static IntentModel Train(const std::vector<IntentDefinition>& intents,
                           double confidence_threshold = kDefaultConfidenceThreshold) {
    std::map<std::string, std::vector<std::string>> data;
    for (const auto& i : intents) data[i.name] = i.training_utterances;
    return Train(data, confidence_threshold);
  }

  /// Exact training utterances return their intent with confidence 1.
  /// Otherwise the intent whose three most cosine-similar training
  /// utterances score highest on average (ties to the lexicographically
  /// first intent), if that average reaches the threshold.
  Classification Classify(std::string_view query) const {
    if (auto it = exact_.find(NormalizeUtterance(query)); it != exact_.end()) return {it->second, 1.0};
    const auto q = Vectorize(query);
    // Per intent, the kNeighbours highest similarities, averaged.
    std::vector<std::vector<double>> nearest(intents_.size());
    for (const auto& [intent, doc] : documents_) {
      auto& top = nearest[intent];
      const double sim = Dot(q, doc);
      top.insert(std::upper_bound(top.begin(), top.end(), sim, std::greater<>()), sim);
      if (top.size() > kNeighbours) top.pop_back();
    }
    std::vector<double> best(intents_.size(), 0.0);
    for (std::size_t c = 0; c < nearest.size(); ++c) {
      for (double v : nearest[c]) best[c] += v;
      if (!nearest[c].empty()) best[c] /= static_cast<double>(kNeighbours);
    }
    Classification result;
    double top = 0.0;
    std::size_t top_index = 0;
    for (std::size_t c = 0; c < best.size(); ++c) {
      if (best[c] > top + 1e-12) {
        top = best[c];
        top_index = c;
      }
    }
    result.confidence = top;
    if (top > 0.0 && top >= threshold_) result.intent = intents_[top_index];
    return result;
  }

  const std::vector<std::string>& intents() const noexcept { return intents_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  double confidence_threshold() const noexcept { return threshold_; }
  std::size_t vocabulary_size() const noexcept { return vocabulary_.size(); }
  const std::map<std::string, std::vector<std::string>>& training_data() const noexcept { return training_; }

  /// The model is its training data and threshold; loading retrains.
  Json ToJson() const {
    return Json{{"confidence_threshold", threshold_}, {"training", training_}, {"warnings", warnings_}};
  }

  static IntentModel FromJson(const Json& j) {
    try {
      return Train(j.at("training").get<std::map<std::string, std::vector<std::string>>>(),
                   j.at("confidence_threshold").get<double>());
    } catch (const Json::exception& e) {
      throw SchemaError(std::string("intent model: ") + e.what());
    }
  }

 private:
  static constexpr std::size_t kNeighbours = 3;

  /// Sparse, L2-normalized TF-IDF vector sorted by term index.
  using SparseVector = std::vector<std::pair<std::size_t, double>>;

  static double Dot(const SparseVector& a, const SparseVector& b) {
    double sum = 0.0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
      if (i->first < j->first) {
        ++i;
      } else if (j->first < i->first) {
        ++j;
      } else {
        sum += i->second * j->second;
        ++i;
        ++j;
      }
    }
    return sum;
  }

  SparseVector Vectorize(std::string_view text) const {
    std::map<std::size_t, double> weights;
    for (const auto& t : ClassifierTokens(text))
      if (auto it = vocabulary_.find(t); it != vocabulary_.end()) weights[it->second] += idf_[it->second];
    double norm = 0.0;
    for (const auto& [_, w] : weights) norm += w * w;
    norm = std::sqrt(norm);
    SparseVector v;
    if (norm == 0.0) return v;
    for (const auto& [i, w] : weights) v.emplace_back(i, w / norm);
    return v;
  }

  double threshold_ = kDefaultConfidenceThreshold;
  std::map<std::string, std::vector<std::string>> training_;
  std::map<std::string, std::size_t> vocabulary_;
  std::vector<double> idf_;
  std::vector<std::string> intents_;
  std::vector<std::pair<std::size_t, SparseVector>> documents_;
  std::map<std::string, std::string> exact_;
  std::vector<std::string> warnings_;
};

}  // namespace dialogforge

#endif  // DIALOGFORGE_RUNTIME_INTENT_MODEL_HPP
