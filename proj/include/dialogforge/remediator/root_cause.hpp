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

// Root-cause backtracking over a failed episode's turns and agenda trace.

#ifndef DIALOGFORGE_REMEDIATOR_ROOT_CAUSE_HPP
#define DIALOGFORGE_REMEDIATOR_ROOT_CAUSE_HPP

#include <optional>
#include <set>
#include <string>

#include "dialogforge/remediator/metrics.hpp"

namespace dialogforge {

DIALOGFORGE_DEFINE_ERROR(NotAnError);

enum class RootCauseCategory { kIntentError, kNerError, kUnmappedMessage, kDialogDesign };

inline std::string ToString(RootCauseCategory c) {
  switch (c) {
    case RootCauseCategory::kIntentError: return "intent_error";
    case RootCauseCategory::kNerError: return "ner_error";
    case RootCauseCategory::kUnmappedMessage: return "unmapped_message";
    case RootCauseCategory::kDialogDesign: return "dialog_design";
  }
  return "dialog_design";
}

struct RootCause {
  int error_turn = 0;
  RootCauseCategory category = RootCauseCategory::kDialogDesign;
  std::string explanation;
  /// Re-requested entity for NER errors.
  std::optional<std::string> slot;
  /// Bot message the simulator could not map, for dialog-act-map repair.
  std::optional<std::string> unmatched_message;
  /// Dialog the bot routed to for intent errors.
  std::optional<std::string> predicted_dialog;
};

inline Json ToJson(const RootCause& r) {
  auto opt = [](const auto& v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"error_turn", r.error_turn},
              {"category", ToString(r.category)},
              {"explanation", r.explanation},
              {"slot", opt(r.slot)},
              {"unmatched_message", opt(r.unmatched_message)},
              {"predicted_dialog", opt(r.predicted_dialog)}};
}

inline RootCause MakeRootCause(int turn, RootCauseCategory category, std::string explanation) {
  RootCause r;
  r.error_turn = turn;
  r.category = category;
  r.explanation = std::move(explanation);
  return r;
}

/// Finds the earliest turn where the conversation left the agenda's
/// expectations: a foreign intent confirmation, a slot requested again
/// after it was informed, or a bot message outside every act map. Errors
/// with no such turn (stalls, turn budget, premature close) are blamed on
/// the dialog design at the recorded error turn.
inline RootCause BacktrackRootCause(const EpisodeRecord& e) {
  if (!IsError(e.outcome)) throw NotAnError("episode '" + e.goal_id + "' has outcome " + ToString(e.outcome));
  const int last = e.error_turn.value_or(static_cast<int>(e.turns.size()) - 1);

  // Slots informed before each turn, replayed from the user acts.
  std::vector<std::set<std::string>> informed_before(e.turns.size());
  std::set<std::string> informed;
  for (std::size_t t = 0; t < e.turns.size(); ++t) {
    informed_before[t] = informed;
    for (const auto& act : e.turns[t].user_acts)
      if (act.kind == UserActKind::kInformSlot && act.slot) informed.insert(*act.slot);
  }

  std::optional<RootCause> earliest;
  for (int t = std::min(last, static_cast<int>(e.turns.size()) - 1); t >= 1; --t) {
    const auto& turn = e.turns[static_cast<std::size_t>(t)];
    std::optional<RootCause> here;
    for (const auto& m : turn.matches) {
      if (m.act == kIntentSuccessAct && m.dialog != e.dialog) {
        here = MakeRootCause(t, RootCauseCategory::kIntentError,
                         "bot confirmed intent of dialog '" + m.dialog + "' instead of '" + e.dialog + "'");
        here->predicted_dialog = m.dialog;
        break;
      }
    }
    if (!here) {
      for (const auto& m : turn.matches) {
        auto slot = RequestedSlot(m.act);
        if (!slot.empty() && informed_before[static_cast<std::size_t>(t)].contains(slot)) {
          here = MakeRootCause(t, RootCauseCategory::kNerError, "bot requested '" + slot + "' again after it was informed");
          here->slot = slot;
          break;
        }
      }
    }
    if (!here) {
      for (const auto& m : turn.matches) {
        if (!m.matched()) {
          here = MakeRootCause(t, RootCauseCategory::kUnmappedMessage,
                           "bot message matches no dialog act: \"" + m.bot_message + "\"");
          here->unmatched_message = m.bot_message;
          break;
        }
      }
    }
    if (here) earliest = std::move(here);
  }
  if (earliest) return *earliest;
  return MakeRootCause(last, RootCauseCategory::kDialogDesign,
                   e.error_detail.empty() ? ToString(e.outcome) : e.error_detail);
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_REMEDIATOR_ROOT_CAUSE_HPP
