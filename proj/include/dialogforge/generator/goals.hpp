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

#ifndef DIALOGFORGE_GENERATOR_GOALS_HPP
#define DIALOGFORGE_GENERATOR_GOALS_HPP

#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dialogforge/generator/act_map.hpp"
#include "dialogforge/generator/ontology.hpp"
#include "dialogforge/generator/paraphrase.hpp"

namespace dialogforge {

DIALOGFORGE_DEFINE_ERROR(MissingOntologyValue);
DIALOGFORGE_DEFINE_ERROR(UnrevisedMapError);

/// One test case: an intent query plus the slot values the simulated user
/// will supply.
struct SimulationGoal {
  std::string goal_id;
  std::string intent;
  std::string dialog;
  std::string intent_query;
  std::map<std::string, std::string> inform_slots;
  std::set<std::string> request_slots;
  std::optional<std::string> origin_utterance;

  bool operator==(const SimulationGoal&) const = default;
};

inline Json ToJson(const SimulationGoal& goal) {
  Json inform = Json::object();
  for (const auto& [slot, value] : goal.inform_slots) inform[slot] = value;
  return Json{{"goal_id", goal.goal_id},
              {"intent", goal.intent},
              {"dialog", goal.dialog},
              {"intent_query", goal.intent_query},
              {"inform_slots", inform},
              {"request_slots", goal.request_slots},
              {"origin_utterance", goal.origin_utterance ? Json(*goal.origin_utterance) : Json(nullptr)}};
}

inline SimulationGoal SimulationGoalFromJson(const Json& doc) {
  detail::SchemaReader r(doc);
  r.ExpectObject(doc, "", {"goal_id", "intent", "dialog", "intent_query", "inform_slots", "request_slots"},
                 {"origin_utterance"});
  SimulationGoal g;
  g.goal_id = r.String(doc["goal_id"], "/goal_id");
  g.intent = r.String(doc["intent"], "/intent");
  g.dialog = r.String(doc["dialog"], "/dialog");
  g.intent_query = r.String(doc["intent_query"], "/intent_query");
  if (!doc["inform_slots"].is_object()) throw SchemaError("/inform_slots: expected object");
  for (const auto& [slot, value] : doc["inform_slots"].items())
    g.inform_slots[slot] = r.String(value, "/inform_slots/" + slot);
  for (const auto& s : r.StringList(doc["request_slots"], "/request_slots")) g.request_slots.insert(s);
  if (doc.contains("origin_utterance") && !doc["origin_utterance"].is_null())
    g.origin_utterance = r.String(doc["origin_utterance"], "/origin_utterance");
  return g;
}

inline std::vector<SimulationGoal> ReadGoalsFile(const std::filesystem::path& path) {
  std::vector<SimulationGoal> goals;
  for (const auto& row : ReadJsonLines(path)) goals.push_back(SimulationGoalFromJson(row));
  return goals;
}

inline std::string GoalsToJsonLines(const std::vector<SimulationGoal>& goals) {
  std::vector<Json> rows;
  rows.reserve(goals.size());
  for (const auto& g : goals) rows.push_back(ToJson(g));
  return DumpJsonLines(rows);
}

/// Inform slots must all be requested by the dialog's map.
inline bool GoalConformsToMap(const SimulationGoal& goal, const DialogActMap& map) {
  if (goal.intent_query.empty() || goal.dialog != map.dialog) return false;
  for (const auto& [slot, _] : goal.inform_slots)
    if (!map.entries.contains(RequestAct(slot))) return false;
  return true;
}

/// An intent query and, for paraphrases, the training utterance it came from.
struct GoalQuery {
  std::string query;
  std::optional<std::string> origin;
};

/// intent -> ordered query pool.
using QueryPool = std::map<std::string, std::vector<GoalQuery>>;

inline QueryPool QueriesFromParaphrases(const ParaphraseSet& set) {
  QueryPool pool;
  for (const auto& [intent, origins] : set.intents)
    for (const auto& [origin, list] : origins)
      for (const auto& p : list) pool[intent].push_back({p, origin});
  return pool;
}

inline QueryPool QueriesFromUtterances(const std::vector<IntentDefinition>& intents) {
  QueryPool pool;
  for (const auto& intent : intents)
    for (const auto& u : intent.training_utterances) pool[intent.name].push_back({u, std::nullopt});
  return pool;
}

struct GoalIntent {
  std::string intent;
  std::string dialog;
};

/// One goal per selected query. Pools larger than `per_intent_cap` are
/// subsampled uniformly without replacement (seed + intent hash); selected
/// queries keep pool order. Inform slots are drawn uniformly from the
/// ontology for every `request_<slot>` act of the dialog's map.
inline std::vector<SimulationGoal> GenerateGoals(const std::vector<DialogActMap>& maps, const Ontology& ontology,
                                                 const std::vector<GoalIntent>& intents, const QueryPool& queries,
                                                 std::size_t per_intent_cap, std::uint64_t seed) {
  std::map<std::string, const DialogActMap*> by_dialog;
  for (const auto& m : maps) by_dialog[m.dialog] = &m;

  std::vector<SimulationGoal> goals;
  for (const auto& [intent, dialog] : intents) {
    auto m = by_dialog.find(dialog);
    if (m == by_dialog.end()) throw UnknownTarget("no dialog-act map for dialog '" + dialog + "'");
    const DialogActMap& map = *m->second;
    if (!map.revised) throw UnrevisedMapError("dialog-act map of '" + dialog + "' has not been revised");
    auto pool_it = queries.find(intent);
    if (pool_it == queries.end()) continue;
    const auto& pool = pool_it->second;

    Rng rng(DeriveSeed(seed, intent));
    std::vector<std::size_t> picked(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) picked[i] = i;
    if (pool.size() > per_intent_cap) {
      rng.Shuffle(picked);
      picked.resize(per_intent_cap);
      std::sort(picked.begin(), picked.end());
    }

    const auto slots = RequestedSlots(map);
    for (std::size_t n = 0; n < picked.size(); ++n) {
      const auto& q = pool[picked[n]];
      SimulationGoal g;
      char id[32];
      std::snprintf(id, sizeof id, "%04zu", n + 1);
      g.goal_id = intent + "-" + id;
      g.intent = intent;
      g.dialog = dialog;
      g.intent_query = q.query;
      g.origin_utterance = q.origin;
      for (const auto& slot : slots) {
        const auto* values = ontology.Values(dialog, slot);
        if (!values || values->empty())
          throw MissingOntologyValue("ontology has no values for slot '" + slot + "' of dialog '" + dialog + "'");
        g.inform_slots[slot] = (*values)[rng.Uniform(values->size())];
      }
      goals.push_back(std::move(g));
    }
  }
  return goals;
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_GENERATOR_GOALS_HPP
