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

// Pipeline configuration.

#ifndef DIALOGFORGE_APP_CONFIG_HPP
#define DIALOGFORGE_APP_CONFIG_HPP

#include <optional>
#include <string>

#include "dialogforge/generator.hpp"
#include "dialogforge/remediator.hpp"
#include "dialogforge/runtime.hpp"
#include "dialogforge/simulator.hpp"

namespace dialogforge {

DIALOGFORGE_DEFINE_ERROR(ConfigError);

enum class ParaphraseMode { kRules, kIngest };
enum class GoalSource { kParaphrases, kUtterances };

struct PipelineConfig {
  std::uint64_t seed = 0;
  OntologyConfig ontology;

  ParaphraseMode paraphrase_mode = ParaphraseMode::kRules;
  std::size_t max_variants = 10;
  /// Ingestion file for ParaphraseMode::kIngest.
  std::optional<std::string> paraphrase_file;

  GoalSource goal_source = GoalSource::kParaphrases;
  std::size_t per_intent_cap = 100;

  double fuzzy_threshold = kDefaultFuzzyThreshold;
  int max_turns = 20;
  std::size_t parallelism = 1;
  /// Base URL of a chat endpoint; the embedded runtime when unset.
  std::optional<std::string> endpoint;

  double intent_confidence_threshold = kDefaultConfidenceThreshold;
  ErrorInjectionConfig injection;

  double move_threshold = kDefaultMoveThreshold;
  double merge_threshold = kDefaultMergeThreshold;
  std::size_t bootstrap_iterations = 10000;
  double bootstrap_level = 0.95;
  std::optional<std::size_t> path_max_length;
  std::size_t max_paths = 100;

  /// Held-out utterances (intent -> list) for retraining evaluation.
  std::optional<std::string> eval_utterances;
  std::size_t eval_per_intent_cap = 1000;

  std::uint64_t StageSeed(std::string_view stage) const { return DeriveSeed(seed, stage); }

  SimulationConfig Simulation() const {
    return {fuzzy_threshold, max_turns, StageSeed("simulate"), parallelism};
  }

  RemediationConfig Remediation() const {
    RemediationConfig r;
    r.move_threshold = move_threshold;
    r.merge_threshold = merge_threshold;
    r.bootstrap = {bootstrap_iterations, bootstrap_level, StageSeed("bootstrap"), parallelism};
    r.path_max_length = path_max_length;
    r.max_paths = max_paths;
    return r;
  }
};

inline Json ToJson(const PipelineConfig& c) {
  auto opt = [](const auto& v) { return v ? Json(*v) : Json(nullptr); };
  return Json{
      {"seed", c.seed},
      {"ontology",
       {{"values_per_entity", c.ontology.values_per_entity},
        {"number_min", c.ontology.number_min},
        {"number_max", c.ontology.number_max},
        {"id_length", c.ontology.id_length}}},
      {"paraphrase",
       {{"mode", c.paraphrase_mode == ParaphraseMode::kRules ? "rules" : "ingest"},
        {"max_variants", c.max_variants},
        {"file", opt(c.paraphrase_file)}}},
      {"goals",
       {{"source", c.goal_source == GoalSource::kParaphrases ? "paraphrases" : "utterances"},
        {"per_intent_cap", c.per_intent_cap}}},
      {"simulation",
       {{"fuzzy_threshold", c.fuzzy_threshold},
        {"max_turns", c.max_turns},
        {"parallelism", c.parallelism},
        {"endpoint", opt(c.endpoint)}}},
      {"runtime", {{"intent_confidence_threshold", c.intent_confidence_threshold}, {"injection", ToJson(c.injection)}}},
      {"remediation",
       {{"move_threshold", c.move_threshold},
        {"merge_threshold", c.merge_threshold},
        {"bootstrap_iterations", c.bootstrap_iterations},
        {"bootstrap_level", c.bootstrap_level},
        {"path_max_length", opt(c.path_max_length)},
        {"max_paths", c.max_paths}}},
      {"retrain", {{"eval_utterances", opt(c.eval_utterances)}, {"eval_per_intent_cap", c.eval_per_intent_cap}}},
  };
}

namespace detail {

class ConfigReader {
 public:
  ConfigReader(const Json& node, std::string path, std::initializer_list<std::string_view> keys)
      : node_(node), path_(std::move(path)) {
    if (!node.is_object()) throw ConfigError(path_ + ": expected object");
    for (const auto& [key, _] : node.items())
      if (std::find(keys.begin(), keys.end(), key) == keys.end())
        throw ConfigError(path_ + ": unknown field '" + key + "'");
  }

  bool Has(const char* key) const { return node_.contains(key) && !node_[key].is_null(); }
  const Json& Child(const char* key) const { return node_[key]; }
  std::string Path(const char* key) const { return path_ + "/" + key; }

  template <typename T>
  void Number(const char* key, T& out, double lo, double hi) const {
    if (!Has(key)) return;
    const auto& v = node_[key];
    if (!v.is_number()) throw ConfigError(Path(key) + ": expected number");
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(Path(key) + ": expected integer");
    }
    const double d = v.get<double>();
    if (!(d >= lo && d <= hi))
      throw ConfigError(Path(key) + ": " + v.dump() + " outside [" + Json(lo).dump() + ", " + Json(hi).dump() + "]");
    out = v.get<T>();
  }

  void String(const char* key, std::optional<std::string>& out) const {
    if (!node_.contains(key)) return;
    if (node_[key].is_null()) {
      out.reset();
      return;
    }
    if (!node_[key].is_string()) throw ConfigError(Path(key) + ": expected string or null");
    out = node_[key].get<std::string>();
  }

  std::string Choice(const char* key, std::initializer_list<std::string_view> choices, std::string fallback) const {
    if (!Has(key)) return fallback;
    if (!node_[key].is_string()) throw ConfigError(Path(key) + ": expected string");
    auto s = node_[key].get<std::string>();
    if (std::find(choices.begin(), choices.end(), s) == choices.end())
      throw ConfigError(Path(key) + ": unsupported value '" + s + "'");
    return s;
  }

 private:
  const Json& node_;
  std::string path_;
};

}  // namespace detail

/// Reads a configuration; absent fields keep their defaults, unknown
/// fields and out-of-range values are rejected.
inline PipelineConfig PipelineConfigFromJson(const Json& doc, PipelineConfig c = {}) {
  using detail::ConfigReader;
  constexpr double kMaxU64 = 18446744073709551615.0;
  ConfigReader root(doc, "", {"seed", "ontology", "paraphrase", "goals", "simulation", "runtime", "remediation", "retrain"});
  root.Number("seed", c.seed, 0, kMaxU64);
  if (root.Has("ontology")) {
    ConfigReader r(root.Child("ontology"), "/ontology", {"values_per_entity", "number_min", "number_max", "id_length"});
    r.Number("values_per_entity", c.ontology.values_per_entity, 1, 10000);
    r.Number("number_min", c.ontology.number_min, -1e15, 1e15);
    r.Number("number_max", c.ontology.number_max, -1e15, 1e15);
    r.Number("id_length", c.ontology.id_length, 1, 64);
    if (c.ontology.number_min > c.ontology.number_max) throw ConfigError("/ontology: number_min exceeds number_max");
  }
  if (root.Has("paraphrase")) {
    ConfigReader r(root.Child("paraphrase"), "/paraphrase", {"mode", "max_variants", "file"});
    c.paraphrase_mode =
        r.Choice("mode", {"rules", "ingest"}, c.paraphrase_mode == ParaphraseMode::kRules ? "rules" : "ingest") ==
                "rules"
            ? ParaphraseMode::kRules
            : ParaphraseMode::kIngest;
    r.Number("max_variants", c.max_variants, 1, 1000);
    r.String("file", c.paraphrase_file);
  }
  if (root.Has("goals")) {
    ConfigReader r(root.Child("goals"), "/goals", {"source", "per_intent_cap"});
    c.goal_source = r.Choice("source", {"paraphrases", "utterances"},
                             c.goal_source == GoalSource::kParaphrases ? "paraphrases" : "utterances") == "paraphrases"
                        ? GoalSource::kParaphrases
                        : GoalSource::kUtterances;
    r.Number("per_intent_cap", c.per_intent_cap, 1, 1e9);
  }
  if (root.Has("simulation")) {
    ConfigReader r(root.Child("simulation"), "/simulation", {"fuzzy_threshold", "max_turns", "parallelism", "endpoint"});
    r.Number("fuzzy_threshold", c.fuzzy_threshold, 0.0, 1.0);
    r.Number("max_turns", c.max_turns, 1, 1000);
    r.Number("parallelism", c.parallelism, 1, 256);
    r.String("endpoint", c.endpoint);
  }
  if (root.Has("runtime")) {
    ConfigReader r(root.Child("runtime"), "/runtime", {"intent_confidence_threshold", "injection"});
    r.Number("intent_confidence_threshold", c.intent_confidence_threshold, 0.0, 1.0);
    if (r.Has("injection")) {
      ConfigReader(r.Child("injection"), "/runtime/injection", {"ner_miss_probability", "forced_intent_map", "seed"});
      try {
        c.injection = ErrorInjectionConfigFromJson(r.Child("injection"));
      } catch (const Json::exception& e) {
        throw ConfigError(std::string("/runtime/injection: ") + e.what());
      } catch (const SchemaError& e) {
        throw ConfigError(std::string("/runtime/injection: ") + e.what());
      }
    }
  }
  if (root.Has("remediation")) {
    ConfigReader r(root.Child("remediation"), "/remediation",
                   {"move_threshold", "merge_threshold", "bootstrap_iterations", "bootstrap_level", "path_max_length",
                    "max_paths"});
    r.Number("move_threshold", c.move_threshold, 0.0, 1.0);
    r.Number("merge_threshold", c.merge_threshold, 0.0, 1.0);
    r.Number("bootstrap_iterations", c.bootstrap_iterations, 0, 1e7);
    r.Number("bootstrap_level", c.bootstrap_level, 0.0, 0.9999);
    if (r.Has("path_max_length")) {
      std::size_t v = 0;
      r.Number("path_max_length", v, 0, 1e6);
      c.path_max_length = v;
    }
    r.Number("max_paths", c.max_paths, 1, 1e7);
  }
  if (root.Has("retrain")) {
    ConfigReader r(root.Child("retrain"), "/retrain", {"eval_utterances", "eval_per_intent_cap"});
    r.String("eval_utterances", c.eval_utterances);
    r.Number("eval_per_intent_cap", c.eval_per_intent_cap, 1, 1e9);
  }
  return c;
}

inline PipelineConfig LoadPipelineConfig(const std::filesystem::path& path) {
  return PipelineConfigFromJson(ReadJsonFile(path));
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_APP_CONFIG_HPP
