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

// Agenda-based user policy. The agenda is a stack of pending user acts
// built from the goal: the intent inform on top, one inform_slot per goal
// slot below it, and a bye sentinel at the bottom that is popped when the
// bot reports task success.

#ifndef DIALOGFORGE_SIMULATOR_AGENDA_HPP
#define DIALOGFORGE_SIMULATOR_AGENDA_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dialogforge/generator/goals.hpp"
#include "dialogforge/simulator/nlg.hpp"
#include "dialogforge/simulator/nlu.hpp"

namespace dialogforge {

DIALOGFORGE_DEFINE_ERROR(IllegalState);

enum class Outcome { kInProgress, kSuccess, kIntentError, kNerError, kOtherError, kMaxTurnsExceeded, kAborted };

inline std::string ToString(Outcome o) {
  switch (o) {
    case Outcome::kInProgress: return "in_progress";
    case Outcome::kSuccess: return "success";
    case Outcome::kIntentError: return "intent_error";
    case Outcome::kNerError: return "ner_error";
    case Outcome::kOtherError: return "other_error";
    case Outcome::kMaxTurnsExceeded: return "max_turns_exceeded";
    case Outcome::kAborted: return "aborted";
  }
  return "in_progress";
}

inline Outcome OutcomeFromString(std::string_view s) {
  for (auto o : {Outcome::kInProgress, Outcome::kSuccess, Outcome::kIntentError, Outcome::kNerError,
                 Outcome::kOtherError, Outcome::kMaxTurnsExceeded, Outcome::kAborted})
    if (ToString(o) == s) return o;
  throw SchemaError("unknown outcome '" + std::string(s) + "'");
}

inline bool IsError(Outcome o) {
  return o == Outcome::kIntentError || o == Outcome::kNerError || o == Outcome::kOtherError ||
         o == Outcome::kMaxTurnsExceeded;
}

struct AgendaState {
  /// Back is the top of the stack.
  std::vector<UserDialogAct> agenda;
  SimulationGoal goal;
  std::map<std::string, std::string> informed;
  int turn_index = 0;
  int max_turns = 20;
  Outcome outcome = Outcome::kInProgress;
  std::optional<int> error_turn;
  /// Dialog whose intent_success_message the bot produced, if any.
  std::optional<std::string> predicted_dialog;
  std::string error_detail;

  std::vector<std::string> Snapshot() const {
    std::vector<std::string> out;
    for (auto it = agenda.rbegin(); it != agenda.rend(); ++it) out.push_back(it->Label());
    return out;
  }
};

inline AgendaState InitialAgenda(const SimulationGoal& goal, int max_turns) {
  AgendaState s;
  s.goal = goal;
  s.max_turns = max_turns;
  s.agenda.push_back(UserDialogAct::Bye());
  for (auto it = goal.inform_slots.rbegin(); it != goal.inform_slots.rend(); ++it)
    s.agenda.push_back(UserDialogAct::InformSlot(it->first, it->second));
  s.agenda.push_back(UserDialogAct::InformIntent(goal.intent_query));
  return s;
}

namespace detail {

inline void Fail(AgendaState& s, Outcome outcome, std::string detail) {
  s.outcome = outcome;
  s.error_turn = s.turn_index;
  s.error_detail = std::move(detail);
}

inline std::optional<UserDialogAct> PopIf(AgendaState& s, UserActKind kind, const std::optional<std::string>& slot) {
  for (auto it = s.agenda.rbegin(); it != s.agenda.rend(); ++it) {
    if (it->kind == kind && (!slot || it->slot == slot)) {
      UserDialogAct act = *it;
      s.agenda.erase(std::next(it).base());
      return act;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Applies one NLU match to the agenda and returns the user acts to send.
/// Rules, in order:
///  (h) turn budget exhausted          -> max_turns_exceeded
///      first turn                     -> inform_intent(query)
///  (f) dialog_success_message         -> success
///  (b) foreign intent_success_message -> intent_error
///  (a) own intent_success_message     -> intent confirmed, nothing to say
///  (c) request_E, E not yet informed  -> inform_slot(E, goal value)
///  (d) request_E, E already informed  -> ner_error
///  (e) confirm_E                      -> confirm_affirm
///  (g) unmatched                      -> other_error
inline std::vector<UserDialogAct> NextUserActs(AgendaState& s, const NluMatch& match) {
  if (s.outcome != Outcome::kInProgress) throw IllegalState("agenda already terminal: " + ToString(s.outcome));
  std::vector<UserDialogAct> out;
  if (s.turn_index >= s.max_turns) {
    detail::Fail(s, Outcome::kMaxTurnsExceeded, "turn budget of " + std::to_string(s.max_turns) + " exhausted");
    return out;
  }
  if (s.turn_index == 0) {
    if (auto act = detail::PopIf(s, UserActKind::kInformIntent, std::nullopt)) out.push_back(*act);
    return out;
  }
  if (!match.matched()) {
    detail::Fail(s, Outcome::kOtherError, "unmatched bot message: " + match.bot_message);
    return out;
  }
  if (match.act == kDialogSuccessAct) {
    detail::PopIf(s, UserActKind::kInformIntent, std::nullopt);
    detail::PopIf(s, UserActKind::kBye, std::nullopt);
    s.agenda.clear();
    s.outcome = Outcome::kSuccess;
    if (!s.predicted_dialog) s.predicted_dialog = s.goal.dialog;
    return out;
  }
  if (match.act == kIntentSuccessAct) {
    if (match.dialog != s.goal.dialog) {
      s.predicted_dialog = match.dialog;
      detail::Fail(s, Outcome::kIntentError, "bot routed the query to dialog '" + match.dialog + "'");
      return out;
    }
    s.predicted_dialog = match.dialog;
    detail::PopIf(s, UserActKind::kInformIntent, std::nullopt);
    return out;
  }
  if (auto slot = RequestedSlot(match.act); !slot.empty()) {
    if (s.informed.contains(slot)) {
      detail::Fail(s, Outcome::kNerError, "bot re-requested slot '" + slot + "'");
      return out;
    }
    auto act = detail::PopIf(s, UserActKind::kInformSlot, slot);
    if (!act) {
      detail::Fail(s, Outcome::kOtherError, "bot requested slot '" + slot + "' that the goal does not define");
      return out;
    }
    s.informed[slot] = *act->value;
    out.push_back(*act);
    return out;
  }
  if (auto slot = ConfirmedSlot(match.act); !slot.empty()) {
    out.push_back(UserDialogAct::ConfirmAffirm(slot));
    return out;
  }
  return out;
}

/// The matches of one bot turn that drive the policy, in application
/// order: a terminal match alone, otherwise the own intent confirmation
/// followed by the last prompt of the turn.
inline std::vector<NluMatch> DecisiveMatches(const std::vector<NluMatch>& matches, const std::string& own_dialog) {
  for (const auto& m : matches)
    if (m.act == kDialogSuccessAct) return {m};
  for (const auto& m : matches)
    if (m.act == kIntentSuccessAct && m.dialog != own_dialog) return {m};
  std::vector<NluMatch> out;
  for (const auto& m : matches)
    if (m.act == kIntentSuccessAct) {
      out.push_back(m);
      break;
    }
  for (auto it = matches.rbegin(); it != matches.rend(); ++it)
    if (ActPriority(it->act) == 1) {
      out.push_back(*it);
      break;
    }
  if (out.empty()) {
    auto unmatched = std::find_if(matches.begin(), matches.end(), [](const NluMatch& m) { return !m.matched(); });
    if (unmatched != matches.end()) out.push_back(*unmatched);
    else if (!matches.empty()) out.push_back(matches.back());
    else out.push_back(NluMatch{});
  }
  return out;
}

/// Runs the policy over one bot turn. A non-terminal turn that yields no
/// user act stalls the conversation and is reported as other_error.
inline std::vector<UserDialogAct> NextUserActsForTurn(AgendaState& s, const std::vector<NluMatch>& matches) {
  std::vector<UserDialogAct> out;
  if (s.turn_index == 0 || s.turn_index >= s.max_turns) return NextUserActs(s, matches.empty() ? NluMatch{} : matches.front());
  for (const auto& m : DecisiveMatches(matches, s.goal.dialog)) {
    auto acts = NextUserActs(s, m);
    out.insert(out.end(), acts.begin(), acts.end());
    if (s.outcome != Outcome::kInProgress) return out;
  }
  if (out.empty()) detail::Fail(s, Outcome::kOtherError, "bot turn contained no prompt for the user");
  return out;
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_SIMULATOR_AGENDA_HPP
