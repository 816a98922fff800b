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

// Template-based NLG for user dialog acts.

#ifndef DIALOGFORGE_SIMULATOR_NLG_HPP
#define DIALOGFORGE_SIMULATOR_NLG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dialogforge/common.hpp"

namespace dialogforge {

DIALOGFORGE_DEFINE_ERROR(MissingTemplate);

enum class UserActKind { kInformIntent, kInformSlot, kConfirmAffirm, kBye };

inline std::string ToString(UserActKind k) {
  switch (k) {
    case UserActKind::kInformIntent: return "inform_intent";
    case UserActKind::kInformSlot: return "inform_slot";
    case UserActKind::kConfirmAffirm: return "confirm_affirm";
    case UserActKind::kBye: return "bye";
  }
  return "bye";
}

inline UserActKind UserActKindFromString(std::string_view s) {
  if (s == "inform_intent") return UserActKind::kInformIntent;
  if (s == "inform_slot") return UserActKind::kInformSlot;
  if (s == "confirm_affirm") return UserActKind::kConfirmAffirm;
  if (s == "bye") return UserActKind::kBye;
  throw SchemaError("unknown user act kind '" + std::string(s) + "'");
}

struct UserDialogAct {
  UserActKind kind = UserActKind::kBye;
  std::optional<std::string> slot;
  std::optional<std::string> value;

  bool operator==(const UserDialogAct&) const = default;

  static UserDialogAct InformIntent(std::string query) {
    return {UserActKind::kInformIntent, std::nullopt, std::move(query)};
  }
  static UserDialogAct InformSlot(std::string slot, std::string value) {
    return {UserActKind::kInformSlot, std::move(slot), std::move(value)};
  }
  static UserDialogAct ConfirmAffirm(std::optional<std::string> slot = {}) {
    return {UserActKind::kConfirmAffirm, std::move(slot), std::nullopt};
  }
  static UserDialogAct Bye() { return {UserActKind::kBye, std::nullopt, std::nullopt}; }

  /// Compact label used in agenda snapshots, e.g. "inform_slot:Email".
  std::string Label() const { return ToString(kind) + (slot ? ":" + *slot : std::string()); }
};

inline Json ToJson(const UserDialogAct& act) {
  Json j{{"kind", ToString(act.kind)}};
  if (act.slot) j["slot"] = *act.slot;
  if (act.value) j["value"] = *act.value;
  return j;
}

inline UserDialogAct UserDialogActFromJson(const Json& j) {
  UserDialogAct act;
  act.kind = UserActKindFromString(j.at("kind").get<std::string>());
  if (j.contains("slot")) act.slot = j["slot"].get<std::string>();
  if (j.contains("value")) act.value = j["value"].get<std::string>();
  return act;
}

namespace detail {

inline std::vector<std::string> Strings(const Json& node, const std::string& key) {
  if (!node.is_array() || node.empty()) throw SchemaError("template file: '" + key + "' must be a non-empty array");
  std::vector<std::string> out;
  for (const auto& s : node) {
    if (!s.is_string()) throw SchemaError("template file: '" + key + "' must hold strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace detail

/// Surface templates keyed by act kind, optionally specialised per slot
/// ("inform_slot:Email"). `{value}` is replaced by the act's value.
struct ResponseTemplateSet {
  std::map<std::string, std::vector<std::string>> templates;

  static ResponseTemplateSet Default() {
    return {{{"inform_intent", {"{value}"}},
             {"inform_slot", {"{value}", "it is {value}", "sure, it is {value}", "here you go: {value}"}},
             {"confirm_affirm", {"yes", "yes, that is right", "correct", "yes please"}},
             {"bye", {"bye", "thanks, bye"}}}};
  }

  const std::vector<std::string>* Find(const UserDialogAct& act) const {
    if (act.slot) {
      auto it = templates.find(ToString(act.kind) + ":" + *act.slot);
      if (it != templates.end() && !it->second.empty()) return &it->second;
    }
    auto it = templates.find(ToString(act.kind));
    if (it != templates.end() && !it->second.empty()) return &it->second;
    return nullptr;
  }
};

inline Json ToJson(const ResponseTemplateSet& set) {
  Json j = Json::object();
  for (const auto& [k, v] : set.templates) j[k] = v;
  return j;
}

inline ResponseTemplateSet ResponseTemplateSetFromJson(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("template file: expected object");
  ResponseTemplateSet set;
  for (const auto& [k, v] : doc.items()) {
    auto kind = k.substr(0, k.find(':'));
    UserActKindFromString(kind);
    set.templates[k] = detail::Strings(v, k);
  }
  for (const char* kind : {"inform_intent", "inform_slot", "confirm_affirm", "bye"})
    if (!set.templates.contains(kind)) throw SchemaError(std::string("template file: no templates for ") + kind);
  return set;
}

/// Surface string for `act`. inform_intent is the query verbatim; other
/// kinds pick a template uniformly with `rng_seed`.
inline std::string Realize(const UserDialogAct& act, const ResponseTemplateSet& templates, std::uint64_t rng_seed) {
  if (act.kind == UserActKind::kInformIntent) return act.value.value_or("");
  const auto* list = templates.Find(act);
  if (!list) throw MissingTemplate("no template for " + act.Label());
  Rng rng(rng_seed);
  std::string out = (*list)[rng.Uniform(list->size())];
  if (auto pos = out.find("{value}"); pos != std::string::npos) out.replace(pos, 7, act.value.value_or(""));
  return out;
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_SIMULATOR_NLG_HPP
