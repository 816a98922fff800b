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

// Platform-neutral bot definition: dialogs made of rule/action/message
// steps, transitions between dialogs, intents with training utterances and
// entity declarations.

#ifndef DIALOGFORGE_BOT_SCHEMA_HPP
#define DIALOGFORGE_BOT_SCHEMA_HPP

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dialogforge/common.hpp"

namespace dialogforge {

enum class StepAction { kSay, kCollect, kConfirm };
enum class TransitionCondition { kAlways, kOnSuccess, kOnFailure };
enum class EntityKind { kEmail, kNumber, kAlphanumericId, kFreeText, kEnumeration };

struct MessageStep {
  std::string text;
  StepAction action = StepAction::kSay;
  std::optional<std::string> slot;
  std::optional<std::string> entity_type;

  bool operator==(const MessageStep&) const = default;
};

struct TransitionRule {
  std::string target;
  TransitionCondition condition = TransitionCondition::kAlways;

  bool operator==(const TransitionRule&) const = default;
};

struct DialogDefinition {
  std::string name;
  std::vector<MessageStep> steps;
  std::vector<TransitionRule> transitions;
  bool is_sub_dialog = false;

  bool operator==(const DialogDefinition&) const = default;
};

struct IntentDefinition {
  std::string name;
  std::string entry_dialog;
  std::vector<std::string> training_utterances;

  bool operator==(const IntentDefinition&) const = default;
};

struct EntityDefinition {
  std::string name;
  EntityKind kind = EntityKind::kFreeText;
  std::vector<std::string> values;

  bool operator==(const EntityDefinition&) const = default;
};

struct BotDefinition {
  int schema_version = kSchemaVersion;
  std::string name;
  std::vector<DialogDefinition> dialogs;
  std::vector<IntentDefinition> intents;
  std::vector<EntityDefinition> entities;
  std::vector<std::string> success_dialogs;

  bool operator==(const BotDefinition&) const = default;

  const DialogDefinition* FindDialog(std::string_view dialog) const {
    for (const auto& d : dialogs)
      if (d.name == dialog) return &d;
    return nullptr;
  }
  const IntentDefinition* FindIntent(std::string_view intent) const {
    for (const auto& i : intents)
      if (i.name == intent) return &i;
    return nullptr;
  }
  const EntityDefinition* FindEntity(std::string_view entity) const {
    for (const auto& e : entities)
      if (e.name == entity) return &e;
    return nullptr;
  }
  bool IsSuccessDialog(std::string_view dialog) const {
    return std::find(success_dialogs.begin(), success_dialogs.end(), dialog) !=
           success_dialogs.end();
  }
  /// Entity declared for `slot` by the first Collect step that fills it.
  const EntityDefinition* EntityForSlot(std::string_view slot) const {
    for (const auto& d : dialogs)
      for (const auto& s : d.steps)
        if (s.action == StepAction::kCollect && s.slot == slot && s.entity_type)
          return FindEntity(*s.entity_type);
    return FindEntity(slot);
  }
};

/// A broken invariant. `path` is a JSON pointer into the serialized
/// definition.
struct Violation {
  std::string code;
  std::string path;
  std::string message;

  bool operator==(const Violation&) const = default;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error("ValidationError", Describe(violations)),
        violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  static std::string Describe(const std::vector<Violation>& violations) {
    std::string out = "bot definition is invalid:";
    for (const auto& v : violations) out += " [" + v.code + " at " + v.path + ": " + v.message + "]";
    return out;
  }
  std::vector<Violation> violations_;
};

/// Placeholders the runtime can always fill, besides collected slots.
inline const std::set<std::string>& BuiltinPlaceholders() {
  static const std::set<std::string> kBuiltins = {"bot_name", "date", "status"};
  return kBuiltins;
}

/// Names inside `{...}` spans, in order of appearance.
inline std::vector<std::string> PlaceholderNames(std::string_view text) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while ((pos = text.find('{', pos)) != std::string_view::npos) {
    auto close = text.find('}', pos);
    if (close == std::string_view::npos) break;
    names.emplace_back(text.substr(pos + 1, close - pos - 1));
    pos = close + 1;
  }
  return names;
}

// ---------------------------------------------------------------------------
// Enum <-> string

inline std::string ToString(StepAction a) {
  switch (a) {
    case StepAction::kSay: return "Say";
    case StepAction::kCollect: return "Collect";
    case StepAction::kConfirm: return "Confirm";
  }
  return "Say";
}

inline std::string ToString(TransitionCondition c) {
  switch (c) {
    case TransitionCondition::kAlways: return "always";
    case TransitionCondition::kOnSuccess: return "on_success";
    case TransitionCondition::kOnFailure: return "on_failure";
  }
  return "always";
}

inline std::string ToString(EntityKind k) {
  switch (k) {
    case EntityKind::kEmail: return "email";
    case EntityKind::kNumber: return "number";
    case EntityKind::kAlphanumericId: return "alphanumeric_id";
    case EntityKind::kFreeText: return "free_text";
    case EntityKind::kEnumeration: return "enumeration";
  }
  return "free_text";
}

namespace detail {

class SchemaReader {
 public:
  explicit SchemaReader(const Json& root) : root_(root) {}

  void ExpectObject(const Json& node, const std::string& path,
                    std::initializer_list<std::string_view> required,
                    std::initializer_list<std::string_view> optional) const {
    if (!node.is_object()) throw SchemaError(path + ": expected object");
    for (auto key : required)
      if (!node.contains(std::string(key)))
        throw SchemaError(path + ": missing required field '" + std::string(key) + "'");
    for (const auto& [key, _] : node.items()) {
      bool known = std::find(required.begin(), required.end(), key) != required.end() ||
                   std::find(optional.begin(), optional.end(), key) != optional.end();
      if (!known) throw SchemaError(path + ": unknown field '" + key + "'");
    }
  }

  static std::string String(const Json& node, const std::string& path) {
    if (!node.is_string()) throw SchemaError(path + ": expected string");
    return node.get<std::string>();
  }

  static const Json& Array(const Json& node, const std::string& path) {
    if (!node.is_array()) throw SchemaError(path + ": expected array");
    return node;
  }

  static std::vector<std::string> StringList(const Json& node, const std::string& path) {
    std::vector<std::string> out;
    const auto& arr = Array(node, path);
    for (std::size_t i = 0; i < arr.size(); ++i)
      out.push_back(String(arr[i], path + "/" + std::to_string(i)));
    return out;
  }

 private:
  const Json& root_;
};

template <typename Enum, std::size_t N>
Enum ParseEnum(const std::string& value, const std::string& path,
               const std::array<std::pair<std::string_view, Enum>, N>& table) {
  for (const auto& [name, e] : table)
    if (name == value) return e;
  throw SchemaError(path + ": unknown value '" + value + "'");
}

}  // namespace detail

/// Structural decoding only (types, required and unknown fields). Invariants
/// are checked by Validate().
inline BotDefinition BotDefinitionFromJson(const Json& doc) {
  detail::SchemaReader r(doc);
  r.ExpectObject(doc, "", {"schema_version", "name", "dialogs", "intents", "entities", "success_dialogs"},
                 {});
  BotDefinition def;
  if (!doc["schema_version"].is_number_integer())
    throw SchemaError("/schema_version: expected integer");
  def.schema_version = doc["schema_version"].get<int>();
  if (def.schema_version != kSchemaVersion)
    throw SchemaError("/schema_version: unsupported version " + std::to_string(def.schema_version));
  def.name = r.String(doc["name"], "/name");

  const auto& dialogs = r.Array(doc["dialogs"], "/dialogs");
  for (std::size_t i = 0; i < dialogs.size(); ++i) {
    const std::string p = "/dialogs/" + std::to_string(i);
    const auto& d = dialogs[i];
    r.ExpectObject(d, p, {"name"}, {"steps", "transitions", "is_sub_dialog"});
    DialogDefinition dialog;
    dialog.name = r.String(d["name"], p + "/name");
    if (d.contains("is_sub_dialog")) {
      if (!d["is_sub_dialog"].is_boolean()) throw SchemaError(p + "/is_sub_dialog: expected boolean");
      dialog.is_sub_dialog = d["is_sub_dialog"].get<bool>();
    }
    if (d.contains("steps")) {
      const auto& steps = r.Array(d["steps"], p + "/steps");
      for (std::size_t j = 0; j < steps.size(); ++j) {
        const std::string sp = p + "/steps/" + std::to_string(j);
        const auto& s = steps[j];
        r.ExpectObject(s, sp, {"text", "action"}, {"slot", "entity_type"});
        MessageStep step;
        step.text = r.String(s["text"], sp + "/text");
        step.action = detail::ParseEnum<StepAction, 3>(
            r.String(s["action"], sp + "/action"), sp + "/action",
            {{{"Say", StepAction::kSay}, {"Collect", StepAction::kCollect}, {"Confirm", StepAction::kConfirm}}});
        if (s.contains("slot")) step.slot = r.String(s["slot"], sp + "/slot");
        if (s.contains("entity_type")) step.entity_type = r.String(s["entity_type"], sp + "/entity_type");
        dialog.steps.push_back(std::move(step));
      }
    }
    if (d.contains("transitions")) {
      const auto& transitions = r.Array(d["transitions"], p + "/transitions");
      for (std::size_t k = 0; k < transitions.size(); ++k) {
        const std::string tp = p + "/transitions/" + std::to_string(k);
        const auto& t = transitions[k];
        r.ExpectObject(t, tp, {"target", "condition"}, {});
        TransitionRule rule;
        rule.target = r.String(t["target"], tp + "/target");
        rule.condition = detail::ParseEnum<TransitionCondition, 3>(
            r.String(t["condition"], tp + "/condition"), tp + "/condition",
            {{{"always", TransitionCondition::kAlways},
              {"on_success", TransitionCondition::kOnSuccess},
              {"on_failure", TransitionCondition::kOnFailure}}});
        dialog.transitions.push_back(std::move(rule));
      }
    }
    def.dialogs.push_back(std::move(dialog));
  }

  const auto& intents = r.Array(doc["intents"], "/intents");
  for (std::size_t i = 0; i < intents.size(); ++i) {
    const std::string p = "/intents/" + std::to_string(i);
    r.ExpectObject(intents[i], p, {"name", "entry_dialog", "training_utterances"}, {});
    IntentDefinition intent;
    intent.name = r.String(intents[i]["name"], p + "/name");
    intent.entry_dialog = r.String(intents[i]["entry_dialog"], p + "/entry_dialog");
    intent.training_utterances =
        r.StringList(intents[i]["training_utterances"], p + "/training_utterances");
    def.intents.push_back(std::move(intent));
  }

  const auto& entities = r.Array(doc["entities"], "/entities");
  for (std::size_t i = 0; i < entities.size(); ++i) {
    const std::string p = "/entities/" + std::to_string(i);
    r.ExpectObject(entities[i], p, {"name", "kind"}, {"values"});
    EntityDefinition entity;
    entity.name = r.String(entities[i]["name"], p + "/name");
    entity.kind = detail::ParseEnum<EntityKind, 5>(
        r.String(entities[i]["kind"], p + "/kind"), p + "/kind",
        {{{"email", EntityKind::kEmail},
          {"number", EntityKind::kNumber},
          {"alphanumeric_id", EntityKind::kAlphanumericId},
          {"free_text", EntityKind::kFreeText},
          {"enumeration", EntityKind::kEnumeration}}});
    if (entities[i].contains("values")) entity.values = r.StringList(entities[i]["values"], p + "/values");
    def.entities.push_back(std::move(entity));
  }

  def.success_dialogs = r.StringList(doc["success_dialogs"], "/success_dialogs");
  return def;
}

inline Json ToJson(const BotDefinition& def) {
  Json doc;
  doc["schema_version"] = def.schema_version;
  doc["name"] = def.name;
  doc["dialogs"] = Json::array();
  for (const auto& d : def.dialogs) {
    Json dj;
    dj["name"] = d.name;
    dj["is_sub_dialog"] = d.is_sub_dialog;
    dj["steps"] = Json::array();
    for (const auto& s : d.steps) {
      Json sj;
      sj["text"] = s.text;
      sj["action"] = ToString(s.action);
      if (s.slot) sj["slot"] = *s.slot;
      if (s.entity_type) sj["entity_type"] = *s.entity_type;
      dj["steps"].push_back(std::move(sj));
    }
    dj["transitions"] = Json::array();
    for (const auto& t : d.transitions)
      dj["transitions"].push_back({{"target", t.target}, {"condition", ToString(t.condition)}});
    doc["dialogs"].push_back(std::move(dj));
  }
  doc["intents"] = Json::array();
  for (const auto& i : def.intents)
    doc["intents"].push_back(
        {{"name", i.name}, {"entry_dialog", i.entry_dialog}, {"training_utterances", i.training_utterances}});
  doc["entities"] = Json::array();
  for (const auto& e : def.entities) {
    Json ej{{"name", e.name}, {"kind", ToString(e.kind)}};
    if (!e.values.empty()) ej["values"] = e.values;
    doc["entities"].push_back(std::move(ej));
  }
  doc["success_dialogs"] = def.success_dialogs;
  return doc;
}

namespace detail {

inline bool IsIdentifier(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

}  // namespace detail

/// Every broken invariant of `def`, in document order. Empty iff valid.
inline std::vector<Violation> Validate(const BotDefinition& def) {
  std::vector<Violation> out;
  auto add = [&](std::string code, std::string path, std::string message) {
    out.push_back({std::move(code), std::move(path), std::move(message)});
  };

  std::set<std::string> dialog_names;
  std::set<std::string> collected_slots;
  for (const auto& d : def.dialogs)
    for (const auto& s : d.steps)
      if (s.action == StepAction::kCollect && s.slot) collected_slots.insert(*s.slot);

  if (!detail::IsIdentifier(def.name)) add("InvalidIdentifier", "/name", "bot name must be an identifier");

  for (std::size_t i = 0; i < def.dialogs.size(); ++i) {
    const auto& d = def.dialogs[i];
    const std::string p = "/dialogs/" + std::to_string(i);
    if (!detail::IsIdentifier(d.name)) add("InvalidIdentifier", p + "/name", "dialog name must be an identifier");
    if (!dialog_names.insert(d.name).second)
      add("DuplicateDialogName", p + "/name", "dialog '" + d.name + "' declared twice");
    if (d.steps.empty() && d.transitions.empty())
      add("EmptyDialog", p, "dialog '" + d.name + "' has neither steps nor transitions");

    for (std::size_t j = 0; j < d.steps.size(); ++j) {
      const auto& s = d.steps[j];
      const std::string sp = p + "/steps/" + std::to_string(j);
      if (s.action == StepAction::kSay) {
        if (s.slot) add("UnexpectedSlot", sp + "/slot", "Say steps take no slot");
      } else if (!s.slot) {
        add("MissingSlot", sp, ToString(s.action) + " step requires a slot");
      }
      if (s.action == StepAction::kCollect) {
        if (!s.entity_type) {
          add("MissingEntityType", sp, "Collect step requires an entity_type");
        } else if (!def.FindEntity(*s.entity_type)) {
          add("UnknownEntity", sp + "/entity_type", "entity '" + *s.entity_type + "' is not declared");
        }
      } else if (s.entity_type && !def.FindEntity(*s.entity_type)) {
        add("UnknownEntity", sp + "/entity_type", "entity '" + *s.entity_type + "' is not declared");
      }
      if (s.action == StepAction::kConfirm && s.slot && !collected_slots.contains(*s.slot) &&
          !def.FindEntity(*s.slot))
        add("UnknownSlot", sp + "/slot", "slot '" + *s.slot + "' is never collected");
      for (const auto& name : PlaceholderNames(s.text))
        if (!collected_slots.contains(name) && !BuiltinPlaceholders().contains(name))
          add("UnknownPlaceholder", sp + "/text", "placeholder '{" + name + "}' is not a slot or built-in");
    }

    int always = 0;
    for (std::size_t k = 0; k < d.transitions.size(); ++k) {
      const auto& t = d.transitions[k];
      const std::string tp = p + "/transitions/" + std::to_string(k);
      if (!def.FindDialog(t.target))
        add("UnknownTransitionTarget", tp + "/target",
            "transition of '" + d.name + "' targets undeclared dialog '" + t.target + "'");
      if (t.condition == TransitionCondition::kAlways && ++always == 2)
        add("MultipleAlwaysTransitions", tp, "dialog '" + d.name + "' has more than one always transition");
    }
  }

  std::set<std::string> intent_names;
  for (std::size_t i = 0; i < def.intents.size(); ++i) {
    const auto& intent = def.intents[i];
    const std::string p = "/intents/" + std::to_string(i);
    if (!detail::IsIdentifier(intent.name)) add("InvalidIdentifier", p + "/name", "intent name must be an identifier");
    if (!intent_names.insert(intent.name).second)
      add("DuplicateIntentName", p + "/name", "intent '" + intent.name + "' declared twice");
    if (!def.FindDialog(intent.entry_dialog))
      add("UnknownEntryDialog", p + "/entry_dialog", "entry dialog '" + intent.entry_dialog + "' is not declared");
    if (intent.training_utterances.empty())
      add("EmptyTrainingUtterances", p + "/training_utterances", "intent '" + intent.name + "' has no utterances");
  }

  std::set<std::string> entity_names;
  for (std::size_t i = 0; i < def.entities.size(); ++i) {
    const auto& e = def.entities[i];
    const std::string p = "/entities/" + std::to_string(i);
    if (!detail::IsIdentifier(e.name)) add("InvalidIdentifier", p + "/name", "entity name must be an identifier");
    if (!entity_names.insert(e.name).second)
      add("DuplicateEntityName", p + "/name", "entity '" + e.name + "' declared twice");
    if (e.kind == EntityKind::kEnumeration && e.values.empty())
      add("EmptyEnumeration", p, "enumeration entity '" + e.name + "' has no values");
  }

  for (std::size_t i = 0; i < def.success_dialogs.size(); ++i)
    if (!def.FindDialog(def.success_dialogs[i]))
      add("UnknownSuccessDialog", "/success_dialogs/" + std::to_string(i),
          "success dialog '" + def.success_dialogs[i] + "' is not declared");
  return out;
}

/// Merges an intent-utterance sidecar (intent -> list of strings) into
/// `def`, skipping utterances already present.
inline void MergeUtteranceSidecar(BotDefinition& def, const Json& sidecar) {
  if (!sidecar.is_object()) throw SchemaError("utterance sidecar: expected object");
  for (const auto& [intent_name, utterances] : sidecar.items()) {
    auto it = std::find_if(def.intents.begin(), def.intents.end(),
                           [&](const IntentDefinition& i) { return i.name == intent_name; });
    if (it == def.intents.end())
      throw ValidationError({{"UnknownIntent", "/" + intent_name, "sidecar names undeclared intent"}});
    for (const auto& u : detail::SchemaReader::StringList(utterances, "/" + intent_name))
      if (std::find(it->training_utterances.begin(), it->training_utterances.end(), u) ==
          it->training_utterances.end())
        it->training_utterances.push_back(u);
  }
}

/// Parses and validates a bot definition document.
/// Throws SyntaxError, SchemaError or ValidationError.
inline BotDefinition LoadBotDefinitionFromString(std::string_view text,
                                                 const Json* sidecar = nullptr) {
  auto def = BotDefinitionFromJson(ParseJson(text, "bot definition"));
  if (sidecar) MergeUtteranceSidecar(def, *sidecar);
  if (auto violations = Validate(def); !violations.empty()) throw ValidationError(std::move(violations));
  return def;
}

inline BotDefinition LoadBotDefinition(const std::filesystem::path& path,
                                       const std::optional<std::filesystem::path>& sidecar = {}) {
  std::optional<Json> side;
  if (sidecar) side = ReadJsonFile(*sidecar);
  return LoadBotDefinitionFromString(ReadFile(path), side ? &*side : nullptr);
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_BOT_SCHEMA_HPP
