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

#ifndef DIALOGFORGE_GENERATOR_ONTOLOGY_HPP
#define DIALOGFORGE_GENERATOR_ONTOLOGY_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dialogforge/generator/act_map.hpp"

namespace dialogforge {

DIALOGFORGE_DEFINE_ERROR(UnknownTarget);

/// Candidate slot values per dialog.
struct Ontology {
  std::uint64_t seed = 0;
  std::map<std::string, std::map<std::string, std::vector<std::string>>> dialogs;

  bool operator==(const Ontology&) const = default;

  const std::vector<std::string>* Values(const std::string& dialog, const std::string& slot) const {
    auto d = dialogs.find(dialog);
    if (d == dialogs.end()) return nullptr;
    auto s = d->second.find(slot);
    return s == d->second.end() ? nullptr : &s->second;
  }
};

struct OntologyConfig {
  std::size_t values_per_entity = 5;
  std::int64_t number_min = 1000;
  std::int64_t number_max = 999999;
  std::size_t id_length = 8;
};

inline Json ToJson(const Ontology& ontology) {
  Json dialogs = Json::object();
  for (const auto& [dialog, slots] : ontology.dialogs) {
    Json sj = Json::object();
    for (const auto& [slot, values] : slots) sj[slot] = values;
    dialogs[dialog] = sj;
  }
  return Json{{"seed", ontology.seed}, {"dialogs", dialogs}};
}

inline Ontology OntologyFromJson(const Json& doc) {
  detail::SchemaReader r(doc);
  r.ExpectObject(doc, "", {"seed", "dialogs"}, {});
  Ontology o;
  if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
    throw SchemaError("/seed: expected integer");
  o.seed = doc["seed"].get<std::uint64_t>();
  if (!doc["dialogs"].is_object()) throw SchemaError("/dialogs: expected object");
  for (const auto& [dialog, slots] : doc["dialogs"].items()) {
    if (!slots.is_object()) throw SchemaError("/dialogs/" + dialog + ": expected object");
    for (const auto& [slot, values] : slots.items())
      o.dialogs[dialog][slot] = r.StringList(values, "/dialogs/" + dialog + "/" + slot);
  }
  return o;
}

/// `k` distinct values of `kind`, deterministic in `seed`.
inline std::vector<std::string> GenerateEntityValues(const EntityDefinition& entity, std::uint64_t seed,
                                                     const OntologyConfig& config = {}) {
  if (entity.kind == EntityKind::kEnumeration) return entity.values;
  Rng rng(seed);
  std::vector<std::string> values;
  std::set<std::string> seen;
  static constexpr std::string_view kAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::size_t attempts = 0;
  while (values.size() < config.values_per_entity && attempts++ < config.values_per_entity * 1000) {
    std::string v;
    switch (entity.kind) {
      case EntityKind::kEmail:
        v = "user" + std::to_string(rng.UniformInt(1, 99999)) + "@example.com";
        break;
      case EntityKind::kNumber:
        v = std::to_string(rng.UniformInt(config.number_min, config.number_max));
        break;
      case EntityKind::kAlphanumericId:
        for (std::size_t i = 0; i < config.id_length; ++i) v.push_back(kAlphabet[rng.Uniform(kAlphabet.size())]);
        break;
      case EntityKind::kFreeText:
        v = "sample " + ToLower(entity.name) + " " + std::to_string(rng.UniformInt(1, 9999));
        break;
      case EntityKind::kEnumeration:
        break;
    }
    if (seen.insert(v).second) values.push_back(std::move(v));
  }
  return values;
}

/// Values for every `request_<slot>` act of every map. Seeds are split per
/// (dialog, slot).
inline Ontology ExtractOntology(const BotDefinition& def, const std::vector<DialogActMap>& maps,
                                std::uint64_t seed, const OntologyConfig& config = {}) {
  Ontology o;
  o.seed = seed;
  for (const auto& map : maps) {
    auto& slots = o.dialogs[map.dialog];
    for (const auto& slot : RequestedSlots(map)) {
      const EntityDefinition* entity = def.EntityForSlot(slot);
      EntityDefinition fallback{slot, EntityKind::kFreeText, {}};
      slots[slot] = GenerateEntityValues(entity ? *entity : fallback,
                                         DeriveSeed(seed, map.dialog + "/" + slot), config);
    }
  }
  return o;
}

// ---------------------------------------------------------------------------
// Human revision

struct DialogRevision {
  std::optional<std::vector<std::string>> intent_success_message;
  std::optional<std::vector<std::string>> dialog_success_message;
  std::map<std::string, std::vector<std::string>> add_entries;
  /// Candidates to drop per act; an empty list drops the whole act.
  std::map<std::string, std::vector<std::string>> remove_entries;
};

struct RevisionDocument {
  std::map<std::string, DialogRevision> dialogs;
  std::map<std::string, std::map<std::string, std::vector<std::string>>> ontology;
};

inline RevisionDocument RevisionDocumentFromJson(const Json& doc) {
  detail::SchemaReader r(doc);
  r.ExpectObject(doc, "", {}, {"dialogs", "ontology"});
  RevisionDocument rev;
  if (doc.contains("dialogs")) {
    if (!doc["dialogs"].is_object()) throw SchemaError("/dialogs: expected object");
    for (const auto& [dialog, body] : doc["dialogs"].items()) {
      const std::string p = "/dialogs/" + dialog;
      r.ExpectObject(body, p, {},
                     {"intent_success_message", "dialog_success_message", "add_entries", "remove_entries"});
      DialogRevision d;
      if (body.contains("intent_success_message"))
        d.intent_success_message = r.StringList(body["intent_success_message"], p + "/intent_success_message");
      if (body.contains("dialog_success_message"))
        d.dialog_success_message = r.StringList(body["dialog_success_message"], p + "/dialog_success_message");
      for (const char* key : {"add_entries", "remove_entries"}) {
        if (!body.contains(key)) continue;
        if (!body[key].is_object()) throw SchemaError(p + "/" + key + ": expected object");
        auto& target = std::string_view(key) == "add_entries" ? d.add_entries : d.remove_entries;
        for (const auto& [act, list] : body[key].items())
          target[act] = r.StringList(list, p + "/" + key + "/" + act);
      }
      rev.dialogs[dialog] = std::move(d);
    }
  }
  if (doc.contains("ontology")) {
    if (!doc["ontology"].is_object()) throw SchemaError("/ontology: expected object");
    for (const auto& [dialog, slots] : doc["ontology"].items()) {
      if (!slots.is_object()) throw SchemaError("/ontology/" + dialog + ": expected object");
      for (const auto& [slot, values] : slots.items())
        rev.ontology[dialog][slot] = r.StringList(values, "/ontology/" + dialog + "/" + slot);
    }
  }
  return rev;
}

/// Applies the revision to one map and the ontology slice of its dialog,
/// then marks the map revised. Throws UnknownTarget for references to
/// acts, candidates or slots that do not exist.
inline std::pair<DialogActMap, Ontology> ApplyRevisions(DialogActMap map, Ontology ontology,
                                                        const RevisionDocument& rev) {
  if (auto it = rev.dialogs.find(map.dialog); it != rev.dialogs.end()) {
    const auto& d = it->second;
    if (d.intent_success_message) {
      if (d.intent_success_message->empty())
        throw UnknownTarget(map.dialog + ": intent_success_message override is empty");
      map.intent_success_message = *d.intent_success_message;
    }
    if (d.dialog_success_message) {
      if (d.dialog_success_message->empty())
        throw UnknownTarget(map.dialog + ": dialog_success_message override is empty");
      map.dialog_success_message = *d.dialog_success_message;
    }
    for (const auto& [act, candidates] : d.remove_entries) {
      auto entry = map.entries.find(act);
      if (entry == map.entries.end()) throw UnknownTarget(map.dialog + ": no act '" + act + "' to remove");
      if (candidates.empty()) {
        map.entries.erase(entry);
        continue;
      }
      for (const auto& c : candidates) {
        auto pos = std::find(entry->second.begin(), entry->second.end(), c);
        if (pos == entry->second.end())
          throw UnknownTarget(map.dialog + ": act '" + act + "' has no candidate '" + c + "'");
        entry->second.erase(pos);
      }
      if (entry->second.empty()) map.entries.erase(entry);
    }
    for (const auto& [act, candidates] : d.add_entries)
      for (const auto& c : candidates) AppendUnique(map.entries[act], c);
  }
  if (auto it = rev.ontology.find(map.dialog); it != rev.ontology.end()) {
    auto& slots = ontology.dialogs[map.dialog];
    for (const auto& [slot, values] : it->second) {
      if (!slots.contains(slot)) throw UnknownTarget(map.dialog + ": ontology has no slot '" + slot + "'");
      if (values.empty()) throw UnknownTarget(map.dialog + ": replacement values for '" + slot + "' are empty");
      slots[slot] = values;
    }
  }
  map.revised = true;
  return {std::move(map), std::move(ontology)};
}

/// Revises a whole map set. Every dialog referenced by `rev` must be
/// present in `maps`.
inline void ApplyRevisions(std::vector<DialogActMap>& maps, Ontology& ontology, const RevisionDocument& rev) {
  for (const auto& [dialog, _] : rev.dialogs)
    if (std::none_of(maps.begin(), maps.end(), [&](const DialogActMap& m) { return m.dialog == dialog; }))
      throw UnknownTarget("revision names unknown dialog '" + dialog + "'");
  for (const auto& [dialog, _] : rev.ontology)
    if (!ontology.dialogs.contains(dialog))
      throw UnknownTarget("revision names unknown ontology dialog '" + dialog + "'");
  for (auto& map : maps) {
    auto [revised, onto] = ApplyRevisions(std::move(map), std::move(ontology), rev);
    map = std::move(revised);
    ontology = std::move(onto);
  }
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_GENERATOR_ONTOLOGY_HPP
