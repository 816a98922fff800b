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

#ifndef DIALOGFORGE_GENERATOR_ACT_MAP_HPP
#define DIALOGFORGE_GENERATOR_ACT_MAP_HPP

#include <map>
#include <string>
#include <vector>

#include "dialogforge/bot_schema.hpp"

namespace dialogforge {

inline constexpr std::string_view kWildcardToken = "{*}";
inline constexpr std::string_view kIntentSuccessAct = "intent_success_message";
inline constexpr std::string_view kDialogSuccessAct = "dialog_success_message";
inline constexpr std::string_view kSayAct = "say";

/// Bot-message candidates per dialog act for one dialog. The simulator's
/// NLU lookup table.
struct DialogActMap {
  std::string dialog;
  std::map<std::string, std::vector<std::string>> entries;
  std::vector<std::string> intent_success_message;
  std::vector<std::string> dialog_success_message;
  bool revised = false;

  bool operator==(const DialogActMap&) const = default;
};

inline std::string RequestAct(std::string_view slot) { return "request_" + std::string(slot); }
inline std::string ConfirmAct(std::string_view slot) { return "confirm_" + std::string(slot); }

/// Slot named by a `request_<slot>` act, or empty.
inline std::string RequestedSlot(std::string_view act) {
  constexpr std::string_view kPrefix = "request_";
  if (act.substr(0, kPrefix.size()) != kPrefix) return {};
  return std::string(act.substr(kPrefix.size()));
}

inline std::string ConfirmedSlot(std::string_view act) {
  constexpr std::string_view kPrefix = "confirm_";
  if (act.substr(0, kPrefix.size()) != kPrefix) return {};
  return std::string(act.substr(kPrefix.size()));
}

/// Replaces every `{name}` span with the wildcard token so that fuzzy
/// matching tolerates runtime substitution.
inline std::string StripPlaceholders(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto open = text.find('{', pos);
    if (open == std::string_view::npos) break;
    auto close = text.find('}', open);
    if (close == std::string_view::npos) break;
    out.append(text.substr(pos, open - pos));
    out.append(kWildcardToken);
    pos = close + 1;
  }
  out.append(text.substr(std::min(pos, text.size())));
  return out;
}

inline void AppendUnique(std::vector<std::string>& list, const std::string& value) {
  if (std::find(list.begin(), list.end(), value) == list.end()) list.push_back(value);
}

/// Slots requested by the map, in act-name order.
inline std::vector<std::string> RequestedSlots(const DialogActMap& map) {
  std::vector<std::string> slots;
  for (const auto& [act, _] : map.entries)
    if (auto slot = RequestedSlot(act); !slot.empty()) slots.push_back(slot);
  return slots;
}

inline Json ToJson(const DialogActMap& map) {
  Json entries = Json::object();
  for (const auto& [act, candidates] : map.entries) entries[act] = candidates;
  return Json{{"dialog", map.dialog},
              {"entries", entries},
              {"intent_success_message", map.intent_success_message},
              {"dialog_success_message", map.dialog_success_message},
              {"revised", map.revised}};
}

inline DialogActMap DialogActMapFromJson(const Json& doc) {
  detail::SchemaReader r(doc);
  r.ExpectObject(doc, "", {"dialog", "entries", "intent_success_message", "dialog_success_message", "revised"},
                 {});
  DialogActMap map;
  map.dialog = r.String(doc["dialog"], "/dialog");
  if (!doc["entries"].is_object()) throw SchemaError("/entries: expected object");
  for (const auto& [act, candidates] : doc["entries"].items()) {
    auto list = r.StringList(candidates, "/entries/" + act);
    if (list.empty()) throw SchemaError("/entries/" + act + ": candidate list is empty");
    map.entries[act] = std::move(list);
  }
  map.intent_success_message = r.StringList(doc["intent_success_message"], "/intent_success_message");
  map.dialog_success_message = r.StringList(doc["dialog_success_message"], "/dialog_success_message");
  if (!doc["revised"].is_boolean()) throw SchemaError("/revised: expected boolean");
  map.revised = doc["revised"].get<bool>();
  return map;
}

/// Per-dialog local maps. Collect steps yield `request_<slot>`, Confirm
/// steps `confirm_<slot>`, Say steps accumulate under `say`. Special acts
/// stay empty until inference.
inline std::map<std::string, DialogActMap> ParseLocalMaps(const BotDefinition& def) {
  std::map<std::string, DialogActMap> out;
  for (const auto& dialog : def.dialogs) {
    DialogActMap map;
    map.dialog = dialog.name;
    for (const auto& step : dialog.steps) {
      std::string act;
      switch (step.action) {
        case StepAction::kSay: act = std::string(kSayAct); break;
        case StepAction::kCollect: act = RequestAct(*step.slot); break;
        case StepAction::kConfirm: act = ConfirmAct(*step.slot); break;
      }
      AppendUnique(map.entries[act], StripPlaceholders(step.text));
    }
    out.emplace(dialog.name, std::move(map));
  }
  return out;
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_GENERATOR_ACT_MAP_HPP
