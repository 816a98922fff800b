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

// Fuzzy-matching NLU: maps bot messages to dialog acts by token-set
// similarity against dialog-act-map candidates.

#ifndef DIALOGFORGE_SIMULATOR_NLU_HPP
#define DIALOGFORGE_SIMULATOR_NLU_HPP

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dialogforge/generator/act_map.hpp"

namespace dialogforge {

inline constexpr std::string_view kUnmatchedAct = "unmatched";
inline constexpr double kDefaultFuzzyThreshold = 0.85;

/// Lowercased, punctuation-free token set plus the number of wildcard
/// tokens (stripped placeholders).
struct TokenSet {
  std::set<std::string> tokens;
  std::size_t wildcards = 0;
};

inline TokenSet TokenizeForMatch(std::string_view text) {
  TokenSet out;
  for (const auto& raw : SplitWhitespace(text)) {
    std::string_view rest = raw;
    std::string token;
    while (!rest.empty()) {
      if (rest.substr(0, kWildcardToken.size()) == kWildcardToken) {
        ++out.wildcards;
        rest.remove_prefix(kWildcardToken.size());
        continue;
      }
      unsigned char c = static_cast<unsigned char>(rest.front());
      if (std::isalnum(c)) token.push_back(static_cast<char>(std::tolower(c)));
      rest.remove_prefix(1);
    }
    if (!token.empty()) out.tokens.insert(std::move(token));
  }
  return out;
}

/// Jaccard similarity of token sets, where each candidate wildcard may
/// absorb one message token the candidate does not otherwise cover.
/// Unused wildcards count against the union.
inline double TokenSetSimilarity(const TokenSet& message, const TokenSet& candidate) {
  std::size_t common = 0;
  for (const auto& t : message.tokens) common += candidate.tokens.count(t);
  const std::size_t uncovered = message.tokens.size() - common;
  const std::size_t absorbed = std::min(candidate.wildcards, uncovered);
  const std::size_t unions = message.tokens.size() + candidate.tokens.size() - common +
                             (candidate.wildcards - absorbed);
  if (unions == 0) return 0.0;
  return static_cast<double>(common + absorbed) / static_cast<double>(unions);
}

inline double TokenSetSimilarity(std::string_view message, std::string_view candidate) {
  return TokenSetSimilarity(TokenizeForMatch(message), TokenizeForMatch(candidate));
}

struct NluMatch {
  std::string act{kUnmatchedAct};
  /// Dialog whose map owns the matched candidate.
  std::string dialog;
  double score = 0.0;
  std::string matched_candidate;
  std::string bot_message;

  bool matched() const { return act != kUnmatchedAct; }
  bool operator==(const NluMatch&) const = default;
};

/// Tie-break rank: terminal and label acts must not be shadowed by generic
/// messages of equal score.
inline int ActPriority(std::string_view act) {
  if (act == kDialogSuccessAct) return 3;
  if (act == kIntentSuccessAct) return 2;
  if (!RequestedSlot(act).empty() || !ConfirmedSlot(act).empty()) return 1;
  return 0;
}

namespace detail {

struct Candidate {
  std::string act;
  std::string dialog;
  std::string text;
  TokenSet tokens;
  bool foreign = false;
};

/// Strict "better than" for candidates scoring `a_score` and `b_score`.
/// Independent of candidate declaration order.
inline bool Better(double a_score, const Candidate& a, double b_score, const Candidate& b) {
  if (a_score != b_score) return a_score > b_score;
  auto key = [](const Candidate& c) {
    return std::make_tuple(-ActPriority(c.act), c.foreign, c.act, c.dialog, c.text);
  };
  return key(a) < key(b);
}

inline void AddMapCandidates(std::vector<Candidate>& out, const DialogActMap& map) {
  for (const auto& [act, list] : map.entries)
    for (const auto& text : list) out.push_back({act, map.dialog, text, TokenizeForMatch(text), false});
  for (const auto& text : map.intent_success_message)
    out.push_back({std::string(kIntentSuccessAct), map.dialog, text, TokenizeForMatch(text), false});
  for (const auto& text : map.dialog_success_message)
    out.push_back({std::string(kDialogSuccessAct), map.dialog, text, TokenizeForMatch(text), false});
}

inline NluMatch BestMatch(const std::vector<Candidate>& candidates, const std::string& message, double threshold) {
  NluMatch result;
  result.bot_message = message;
  const TokenSet tokens = TokenizeForMatch(message);
  const Candidate* best = nullptr;
  double best_score = -1.0;
  for (const auto& c : candidates) {
    double s = TokenSetSimilarity(tokens, c.tokens);
    if (!best || Better(s, c, best_score, *best)) {
      best = &c;
      best_score = s;
    }
  }
  if (!best) return result;
  result.score = best_score;
  result.matched_candidate = best->text;
  if (best_score >= threshold) {
    result.act = best->act;
    result.dialog = best->dialog;
  }
  return result;
}

}  // namespace detail

/// Best act of `map` for `bot_message`; `unmatched` below `threshold`.
inline NluMatch MatchDialogAct(const std::string& bot_message, const DialogActMap& map,
                               double threshold = kDefaultFuzzyThreshold) {
  std::vector<detail::Candidate> candidates;
  detail::AddMapCandidates(candidates, map);
  return detail::BestMatch(candidates, bot_message, threshold);
}

/// NLU for one goal: the goal dialog's full map plus the
/// intent_success_message candidates of every other dialog, which reveal
/// misrouted intents.
class GoalNlu {
 public:
  GoalNlu(const DialogActMap& own, const std::vector<DialogActMap>& all_maps, double threshold)
      : threshold_(threshold) {
    detail::AddMapCandidates(candidates_, own);
    for (const auto& m : all_maps) {
      if (m.dialog == own.dialog) continue;
      for (const auto& text : m.intent_success_message)
        candidates_.push_back({std::string(kIntentSuccessAct), m.dialog, text, TokenizeForMatch(text), true});
    }
    own_dialog_ = own.dialog;
  }

  NluMatch Match(const std::string& bot_message) const {
    return detail::BestMatch(candidates_, bot_message, threshold_);
  }

  const std::string& own_dialog() const noexcept { return own_dialog_; }

 private:
  double threshold_;
  std::string own_dialog_;
  std::vector<detail::Candidate> candidates_;
};

inline Json ToJson(const NluMatch& m) {
  return Json{{"act", m.act},
              {"dialog", m.dialog},
              {"score", m.score},
              {"matched_candidate", m.matched_candidate},
              {"bot_message", m.bot_message}};
}

inline NluMatch NluMatchFromJson(const Json& j) {
  NluMatch m;
  m.act = j.at("act").get<std::string>();
  m.dialog = j.at("dialog").get<std::string>();
  m.score = j.at("score").get<double>();
  m.matched_candidate = j.at("matched_candidate").get<std::string>();
  m.bot_message = j.at("bot_message").get<std::string>();
  return m;
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_SIMULATOR_NLU_HPP
