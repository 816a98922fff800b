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

// Episode loop and the batch runner.

#ifndef DIALOGFORGE_SIMULATOR_RUNNER_HPP
#define DIALOGFORGE_SIMULATOR_RUNNER_HPP

#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "dialogforge/simulator/client.hpp"
#include "dialogforge/simulator/episode.hpp"

namespace dialogforge {

struct SimulationConfig {
  double fuzzy_threshold = kDefaultFuzzyThreshold;
  int max_turns = 20;
  std::uint64_t seed = 0;
  std::size_t parallelism = 1;
};

/// Maps each dialog to the intent that enters it, for labelling predicted
/// intents.
inline std::map<std::string, std::string> DialogIntentIndex(const std::vector<SimulationGoal>& goals) {
  std::map<std::string, std::string> index;
  for (const auto& g : goals) index.emplace(g.dialog, g.intent);
  return index;
}

/// Drives one conversation until a terminal outcome. The session is always
/// ended, also when the transport fails; such episodes are `aborted`.
inline EpisodeRecord RunEpisode(const SimulationGoal& goal, const GoalNlu& nlu, const ResponseTemplateSet& templates,
                                ChatClient& client, const SimulationConfig& config,
                                const std::map<std::string, std::string>& dialog_intents = {}) {
  EpisodeRecord record;
  record.goal_id = goal.goal_id;
  record.intent = goal.intent;
  record.dialog = goal.dialog;
  record.intent_query = goal.intent_query;
  record.origin_utterance = goal.origin_utterance;

  AgendaState state = InitialAgenda(goal, config.max_turns);
  std::optional<std::string> session;
  try {
    auto start = client.StartSession(goal.goal_id);
    session = start.session_id;
    std::vector<std::string> bot_messages = std::move(start.messages);
    bool closed = false;
    while (true) {
      TurnRecord turn;
      turn.index = state.turn_index;
      turn.bot_messages = bot_messages;
      for (const auto& m : bot_messages) turn.matches.push_back(nlu.Match(m));
      turn.user_acts = NextUserActsForTurn(state, turn.matches);
      if (state.outcome == Outcome::kInProgress && closed) {
        detail::Fail(state, Outcome::kOtherError, "bot closed the session before reporting success");
      }
      std::vector<std::string> parts;
      for (std::size_t i = 0; i < turn.user_acts.size(); ++i)
        parts.push_back(Realize(turn.user_acts[i], templates,
                                DeriveSeed(config.seed, goal.goal_id + "#" + std::to_string(turn.index) + "#" +
                                                            std::to_string(i))));
      turn.user_utterance = Join(parts, " ");
      record.turns.push_back(std::move(turn));
      record.agenda_trace.push_back(state.Snapshot());
      if (state.outcome != Outcome::kInProgress) break;

      auto reply = client.Send(*session, record.turns.back().user_utterance);
      bot_messages = std::move(reply.messages);
      closed = reply.closed;
      ++state.turn_index;
    }
    record.outcome = state.outcome;
  } catch (const TransportError& e) {
    record.outcome = Outcome::kAborted;
    record.transport_error = e.what();
  }
  if (session) {
    try {
      client.EndSession(*session);
    } catch (const TransportError&) {
    }
  }
  if (record.outcome != Outcome::kAborted) {
    record.error_turn = state.error_turn;
    record.error_detail = state.error_detail;
  }
  record.informed = state.informed;
  record.predicted_dialog = state.predicted_dialog;
  if (state.predicted_dialog) {
    auto it = dialog_intents.find(*state.predicted_dialog);
    record.predicted_intent = it != dialog_intents.end() ? it->second : *state.predicted_dialog;
  }
  return record;
}

/// One record per goal, in goal order, regardless of completion order.
/// Transport failures are recorded per episode and never abort the batch.
inline std::vector<EpisodeRecord> RunSimulation(const std::vector<SimulationGoal>& goals,
                                                const std::vector<DialogActMap>& maps,
                                                const ResponseTemplateSet& templates, ChatClient& client,
                                                const SimulationConfig& config,
                                                std::map<std::string, std::string> dialog_intents = {}) {
  if (config.parallelism < 1) throw IllegalState("parallelism must be at least 1");
  std::map<std::string, const DialogActMap*> by_dialog;
  for (const auto& m : maps) {
    if (!m.revised) throw UnrevisedMapError("dialog-act map of '" + m.dialog + "' has not been revised");
    by_dialog[m.dialog] = &m;
  }
  std::map<std::string, GoalNlu> nlus;
  for (const auto& g : goals) {
    if (nlus.contains(g.dialog)) continue;
    auto it = by_dialog.find(g.dialog);
    if (it == by_dialog.end()) throw UnknownTarget("no dialog-act map for dialog '" + g.dialog + "'");
    nlus.emplace(g.dialog, GoalNlu(*it->second, maps, config.fuzzy_threshold));
  }
  for (auto& [dialog, intent] : DialogIntentIndex(goals)) dialog_intents.emplace(dialog, intent);

  std::vector<EpisodeRecord> out(goals.size());
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < goals.size(); i = next++)
        out[i] = RunEpisode(goals[i], nlus.at(goals[i].dialog), templates, client, config, dialog_intents);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = goals.size();
    }
  };
  const std::size_t threads = std::min(config.parallelism, std::max<std::size_t>(goals.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_SIMULATOR_RUNNER_HPP
