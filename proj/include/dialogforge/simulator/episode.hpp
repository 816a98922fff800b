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

#ifndef DIALOGFORGE_SIMULATOR_EPISODE_HPP
#define DIALOGFORGE_SIMULATOR_EPISODE_HPP

#include <optional>
#include <string>
#include <vector>

#include "dialogforge/simulator/agenda.hpp"

namespace dialogforge {

struct TurnRecord {
  int index = 0;
  std::vector<std::string> bot_messages;
  std::vector<NluMatch> matches;
  std::vector<UserDialogAct> user_acts;
  std::string user_utterance;

  bool operator==(const TurnRecord&) const = default;
};

/// A finished simulated conversation.
struct EpisodeRecord {
  std::string goal_id;
  std::string intent;
  std::string dialog;
  std::string intent_query;
  std::optional<std::string> origin_utterance;
  std::vector<TurnRecord> turns;
  /// Agenda snapshot (top first) after each turn, aligned with `turns`.
  std::vector<std::vector<std::string>> agenda_trace;
  Outcome outcome = Outcome::kInProgress;
  std::optional<int> error_turn;
  std::string error_detail;
  std::optional<std::string> predicted_dialog;
  std::optional<std::string> predicted_intent;
  std::map<std::string, std::string> informed;
  std::optional<std::string> transport_error;

  bool operator==(const EpisodeRecord&) const = default;
};

inline Json ToJson(const TurnRecord& t) {
  Json matches = Json::array();
  for (const auto& m : t.matches) matches.push_back(ToJson(m));
  Json acts = Json::array();
  for (const auto& a : t.user_acts) acts.push_back(ToJson(a));
  return Json{{"index", t.index},
              {"bot_messages", t.bot_messages},
              {"matches", matches},
              {"user_acts", acts},
              {"user_utterance", t.user_utterance}};
}

inline Json ToJson(const EpisodeRecord& e) {
  auto opt = [](const auto& v) { return v ? Json(*v) : Json(nullptr); };
  Json turns = Json::array();
  for (const auto& t : e.turns) turns.push_back(ToJson(t));
  Json informed = Json::object();
  for (const auto& [k, v] : e.informed) informed[k] = v;
  return Json{{"schema_version", kSchemaVersion},
              {"goal_id", e.goal_id},
              {"intent", e.intent},
              {"dialog", e.dialog},
              {"intent_query", e.intent_query},
              {"origin_utterance", opt(e.origin_utterance)},
              {"turns", turns},
              {"agenda_trace", e.agenda_trace},
              {"outcome", ToString(e.outcome)},
              {"error_turn", opt(e.error_turn)},
              {"error_detail", e.error_detail},
              {"predicted_dialog", opt(e.predicted_dialog)},
              {"predicted_intent", opt(e.predicted_intent)},
              {"informed", informed},
              {"transport_error", opt(e.transport_error)}};
}

inline EpisodeRecord EpisodeRecordFromJson(const Json& j) {
  auto opt_string = [&](const char* key) -> std::optional<std::string> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<std::string>();
  };
  try {
    EpisodeRecord e;
    if (j.at("schema_version").get<int>() != kSchemaVersion) throw SchemaError("episode: unsupported schema_version");
    e.goal_id = j.at("goal_id").get<std::string>();
    e.intent = j.at("intent").get<std::string>();
    e.dialog = j.at("dialog").get<std::string>();
    e.intent_query = j.at("intent_query").get<std::string>();
    e.origin_utterance = opt_string("origin_utterance");
    for (const auto& tj : j.at("turns")) {
      TurnRecord t;
      t.index = tj.at("index").get<int>();
      t.bot_messages = tj.at("bot_messages").get<std::vector<std::string>>();
      for (const auto& m : tj.at("matches")) t.matches.push_back(NluMatchFromJson(m));
      for (const auto& a : tj.at("user_acts")) t.user_acts.push_back(UserDialogActFromJson(a));
      t.user_utterance = tj.at("user_utterance").get<std::string>();
      e.turns.push_back(std::move(t));
    }
    e.agenda_trace = j.at("agenda_trace").get<std::vector<std::vector<std::string>>>();
    e.outcome = OutcomeFromString(j.at("outcome").get<std::string>());
    if (!j.at("error_turn").is_null()) e.error_turn = j["error_turn"].get<int>();
    e.error_detail = j.at("error_detail").get<std::string>();
    e.predicted_dialog = opt_string("predicted_dialog");
    e.predicted_intent = opt_string("predicted_intent");
    e.informed = j.at("informed").get<std::map<std::string, std::string>>();
    e.transport_error = opt_string("transport_error");
    return e;
  } catch (const Json::exception& ex) {
    throw SchemaError(std::string("episode record: ") + ex.what());
  }
}

inline std::vector<EpisodeRecord> ReadEpisodesFile(const std::filesystem::path& path) {
  std::vector<EpisodeRecord> out;
  for (const auto& row : ReadJsonLines(path)) out.push_back(EpisodeRecordFromJson(row));
  return out;
}

inline std::string EpisodesToJsonLines(const std::vector<EpisodeRecord>& episodes) {
  std::vector<Json> rows;
  rows.reserve(episodes.size());
  for (const auto& e : episodes) rows.push_back(ToJson(e));
  return DumpJsonLines(rows);
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_SIMULATOR_EPISODE_HPP
