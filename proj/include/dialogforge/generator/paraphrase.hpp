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

// Paraphrase generation for intent probing: a rule-based provider driven by
// a bundled synonym lexicon, and verbatim ingestion of externally produced
// paraphrases.

#ifndef DIALOGFORGE_GENERATOR_PARAPHRASE_HPP
#define DIALOGFORGE_GENERATOR_PARAPHRASE_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dialogforge/bot_schema.hpp"

namespace dialogforge {

DIALOGFORGE_DEFINE_ERROR(EmptyLexicon);

enum class ParaphraseProvenance { kRuleBased, kIngested };

/// intent -> original utterance -> paraphrases. Origins are kept in
/// lexicographic order so file round-trips preserve goal sampling.
struct ParaphraseSet {
  ParaphraseProvenance provenance = ParaphraseProvenance::kRuleBased;
  std::map<std::string, std::map<std::string, std::vector<std::string>>> intents;

  std::size_t Count(const std::string& intent) const {
    std::size_t n = 0;
    if (auto it = intents.find(intent); it != intents.end())
      for (const auto& [_, list] : it->second) n += list.size();
    return n;
  }
  std::size_t Count() const {
    std::size_t n = 0;
    for (const auto& [intent, _] : intents) n += Count(intent);
    return n;
  }
};

using Lexicon = std::map<std::string, std::vector<std::string>>;

struct ParaphraseConfig {
  std::size_t max_variants = 10;
  std::uint64_t seed = 0;
  Lexicon lexicon;
  std::set<std::string> stopwords;
  std::vector<std::string> leading_phrases{"please", "i want to", "i need to"};
};

/// The bundled lexicon: customer-service verbs and nouns with the
/// substitutions real users make for them.
inline const Lexicon& BundledLexicon() {
  static const Lexicon kLexicon = {
      {"agent", {"representative", "human", "person", "operator"}},
      {"assistance", {"help", "support"}},
      {"broken", {"faulty", "damaged", "not working"}},
      {"bug", {"glitch", "defect", "error"}},
      {"buy", {"purchase", "order", "get"}},
      {"bye", {"goodbye", "farewell"}},
      {"case", {"ticket", "issue"}},
      {"chat", {"conversation", "session", "talk"}},
      {"check", {"verify", "see", "look up", "track"}},
      {"close", {"end", "shut"}},
      {"connect", {"put", "link", "transfer"}},
      {"delivery", {"shipping", "shipment", "arrival"}},
      {"done", {"finished", "through"}},
      {"end", {"finish", "stop", "close", "terminate"}},
      {"error", {"bug", "fault", "glitch"}},
      {"existing", {"open", "current", "previous"}},
      {"help", {"assist", "support"}},
      {"human", {"person", "agent"}},
      {"issue", {"problem", "case", "ticket", "complaint"}},
      {"know", {"find out", "learn", "see"}},
      {"need", {"want", "require"}},
      {"new", {"fresh", "another"}},
      {"order", {"purchase", "package", "shipment"}},
      {"price", {"cost", "rate"}},
      {"pricing", {"prices", "costs", "rates"}},
      {"problem", {"issue", "trouble", "fault", "glitch"}},
      {"product", {"item", "plan", "package"}},
      {"purchase", {"buy", "order"}},
      {"quote", {"estimate", "offer"}},
      {"report", {"file", "log", "submit", "raise"}},
      {"sales", {"salespeople", "sales team"}},
      {"speak", {"talk", "chat"}},
      {"status", {"progress", "state", "update"}},
      {"talk", {"speak", "chat"}},
      {"ticket", {"case", "request"}},
      {"track", {"follow", "trace", "check"}},
      {"transfer", {"move", "connect", "pass"}},
      {"want", {"need", "would like"}},
  };
  return kLexicon;
}

inline const std::set<std::string>& BundledStopwords() {
  static const std::set<std::string> kStopwords = {
      "a",  "about", "am",   "an",   "are",  "at",    "be",   "can",  "could", "do",   "does",
      "for", "i",    "in",   "is",   "it",   "just",  "me",   "my",   "of",    "on",   "please",
      "some", "that", "the", "this", "to",   "with",  "would", "you", "your"};
  return kStopwords;
}

inline ParaphraseConfig DefaultParaphraseConfig(std::uint64_t seed = 0) {
  ParaphraseConfig config;
  config.seed = seed;
  config.lexicon = BundledLexicon();
  config.stopwords = BundledStopwords();
  return config;
}

namespace detail {

inline std::string LexiconKey(std::string_view token) {
  std::string key;
  for (char c : token)
    if (std::isalnum(static_cast<unsigned char>(c))) key.push_back(static_cast<char>(std::tolower(c)));
  return key;
}

inline std::string DeleteStopwords(const std::vector<std::string>& tokens, const std::set<std::string>& stopwords) {
  std::vector<std::string> kept;
  for (const auto& t : tokens)
    if (!stopwords.contains(LexiconKey(t))) kept.push_back(t);
  return Join(kept, " ");
}

inline std::string ReorderClauses(std::string_view text) {
  std::vector<std::string> clauses;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      auto clause = Trim(text.substr(start, i - start));
      if (!clause.empty()) clauses.push_back(std::move(clause));
      start = i + 1;
    }
  }
  if (clauses.size() < 2) return std::string(text);
  std::rotate(clauses.rbegin(), clauses.rbegin() + 1, clauses.rend());
  return Join(clauses, ", ");
}

}  // namespace detail

/// Variants of one utterance, already filtered against the original and
/// normalized duplicates. Composes synonym substitution (single and
/// double), stopword deletion, leading-phrase prepending and clause
/// reordering, then draws up to `max_variants` with `rng`.
inline std::vector<std::string> ParaphraseUtterance(const std::string& utterance, const ParaphraseConfig& config,
                                                    Rng& rng) {
  const auto tokens = SplitWhitespace(utterance);
  std::vector<std::string> bases{Join(tokens, " ")};
  std::vector<std::pair<std::size_t, const std::vector<std::string>*>> hits;
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (auto it = config.lexicon.find(detail::LexiconKey(tokens[i])); it != config.lexicon.end())
      hits.emplace_back(i, &it->second);
  for (const auto& [i, synonyms] : hits)
    for (const auto& s : *synonyms) {
      auto t = tokens;
      t[i] = s;
      bases.push_back(Join(t, " "));
    }
  for (std::size_t a = 0; a < hits.size(); ++a)
    for (std::size_t b = a + 1; b < hits.size(); ++b)
      for (const auto& sa : *hits[a].second)
        for (const auto& sb : *hits[b].second) {
          auto t = tokens;
          t[hits[a].first] = sa;
          t[hits[b].first] = sb;
          bases.push_back(Join(t, " "));
        }

  std::vector<std::string> pool;
  for (const auto& base : bases) {
    pool.push_back(base);
    pool.push_back(detail::DeleteStopwords(SplitWhitespace(base), config.stopwords));
    for (const auto& lead : config.leading_phrases)
      if (NormalizeUtterance(base).rfind(NormalizeUtterance(lead) + " ", 0) != 0) pool.push_back(lead + " " + base);
    pool.push_back(detail::ReorderClauses(base));
  }

  const std::string original = NormalizeUtterance(utterance);
  std::set<std::string> seen{original};
  std::vector<std::string> unique;
  for (auto& p : pool) {
    auto norm = NormalizeUtterance(p);
    if (norm.empty() || !seen.insert(norm).second) continue;
    unique.push_back(std::move(p));
  }
  rng.Shuffle(unique);
  if (unique.size() > config.max_variants) unique.resize(config.max_variants);
  return unique;
}

/// Rule-based paraphrases for every training utterance. Each intent draws
/// from its own generator (seed + intent hash), so intents can be processed
/// in any order.
inline ParaphraseSet GenerateParaphrases(const std::vector<IntentDefinition>& intents,
                                         const ParaphraseConfig& config) {
  if (config.lexicon.empty()) throw EmptyLexicon("rule-based paraphrasing needs a non-empty lexicon");
  ParaphraseSet out;
  out.provenance = ParaphraseProvenance::kRuleBased;
  for (const auto& intent : intents) {
    Rng rng(DeriveSeed(config.seed, intent.name));
    auto& origins = out.intents[intent.name];
    for (const auto& u : intent.training_utterances) {
      auto variants = ParaphraseUtterance(u, config, rng);
      if (variants.empty()) continue;
      auto& list = origins[u];
      for (auto& v : variants) AppendUnique(list, v);
    }
  }
  return out;
}

/// Reads an ingestion document (intent -> origin -> paraphrases) verbatim,
/// dropping entries equal to their origin or to an earlier paraphrase
/// after normalization.
inline ParaphraseSet IngestParaphrases(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("paraphrase file: expected object");
  ParaphraseSet out;
  out.provenance = ParaphraseProvenance::kIngested;
  for (const auto& [intent, origins] : doc.items()) {
    if (!origins.is_object()) throw SchemaError("/" + intent + ": expected object");
    auto& target = out.intents[intent];
    for (const auto& [origin, list] : origins.items()) {
      std::set<std::string> seen{NormalizeUtterance(origin)};
      std::vector<std::string> kept;
      for (const auto& p : detail::SchemaReader::StringList(list, "/" + intent + "/" + origin))
        if (!NormalizeUtterance(p).empty() && seen.insert(NormalizeUtterance(p)).second) kept.push_back(p);
      if (!kept.empty()) target[origin] = std::move(kept);
    }
  }
  return out;
}

inline Json ToJson(const ParaphraseSet& set) {
  Json doc = Json::object();
  for (const auto& [intent, origins] : set.intents) {
    Json oj = Json::object();
    for (const auto& [origin, list] : origins) oj[origin] = list;
    doc[intent] = oj;
  }
  return doc;
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_GENERATOR_PARAPHRASE_HPP
