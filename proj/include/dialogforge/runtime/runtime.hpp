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

// Reference bot platform: executes a BotDefinition with an intent model,
// pattern-based entity extraction and configurable error injection.

#ifndef DIALOGFORGE_RUNTIME_RUNTIME_HPP
#define DIALOGFORGE_RUNTIME_RUNTIME_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "dialogforge/runtime/intent_model.hpp"
#include "dialogforge/simulator/client.hpp"

namespace dialogforge {

DIALOGFORGE_DEFINE_ERROR(SessionClosed);

struct ErrorInjectionConfig {
  /// Per-slot probability that a successful extraction is discarded. The
  /// key "*" applies to slots without their own entry.
  std::map<std::string, double> ner_miss_probability;
  /// Lowercase query substring -> intent; checked before the classifier.
  std::map<std::string, std::string> forced_intent_map;
  std::uint64_t seed = 0;

  double MissProbability(const std::string& slot) const {
    if (auto it = ner_miss_probability.find(slot); it != ner_miss_probability.end()) return it->second;
    if (auto it = ner_miss_probability.find("*"); it != ner_miss_probability.end()) return it->second;
    return 0.0;
  }
};

inline Json ToJson(const ErrorInjectionConfig& c) {
  return Json{{"ner_miss_probability", c.ner_miss_probability},
              {"forced_intent_map", c.forced_intent_map},
              {"seed", c.seed}};
}

inline ErrorInjectionConfig ErrorInjectionConfigFromJson(const Json& j) {
  ErrorInjectionConfig c;
  if (j.contains("ner_miss_probability")) {
    const auto& p = j["ner_miss_probability"];
    if (p.is_number()) {
      c.ner_miss_probability["*"] = p.get<double>();
    } else {
      c.ner_miss_probability = p.get<std::map<std::string, double>>();
    }
  }
  if (j.contains("forced_intent_map")) c.forced_intent_map = j["forced_intent_map"].get<std::map<std::string, std::string>>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  for (const auto& [slot, p] : c.ner_miss_probability)
    if (!(p >= 0.0 && p <= 1.0)) throw SchemaError("ner_miss_probability for '" + slot + "' must be in [0,1]");
  return c;
}

struct RuntimeOptions {
  std::string welcome_message = "Hi, I'm your virtual assistant. How can I help you today?";
  std::string fallback_message = "Sorry, I didn't understand that. Could you rephrase?";
  std::size_t max_transitions_per_turn = 64;
};

struct InjectionEvent {
  std::string hint;
  std::string dialog;
  std::string slot;
};

/// Pulls a value of `kind` out of a user message, or nothing.
inline std::optional<std::string> ExtractEntity(const EntityDefinition& entity, const std::string& message) {
  switch (entity.kind) {
    case EntityKind::kEmail: {
      static const std::regex kEmail(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})");
      std::smatch m;
      if (std::regex_search(message, m, kEmail)) return m.str();
      return std::nullopt;
    }
    case EntityKind::kNumber: {
      static const std::regex kNumber(R"(-?\d+)");
      std::smatch m;
      if (std::regex_search(message, m, kNumber)) return m.str();
      return std::nullopt;
    }
    case EntityKind::kAlphanumericId: {
      for (const auto& raw : SplitWhitespace(message)) {
        std::string token;
        for (char c : raw)
          if (std::isalnum(static_cast<unsigned char>(c))) token.push_back(c);
        if (token.size() >= 4 && std::all_of(token.begin(), token.end(), [](unsigned char c) {
              return std::isdigit(c) || std::isupper(c);
            }))
          return token;
      }
      return std::nullopt;
    }
    case EntityKind::kEnumeration: {
      const std::string lower = ToLower(message);
      const std::string* best = nullptr;
      for (const auto& v : entity.values)
        if (lower.find(ToLower(v)) != std::string::npos && (!best || v.size() > best->size())) best = &v;
      if (best) return *best;
      return std::nullopt;
    }
    case EntityKind::kFreeText: {
      auto text = Trim(message);
      if (text.empty()) return std::nullopt;
      return text;
    }
  }
  return std::nullopt;
}

inline bool IsAffirmative(const std::string& message) {
  static const std::set<std::string> kYes = {"yes", "yeah", "yep", "sure", "correct", "right", "ok", "okay", "affirmative"};
  for (const auto& t : ClassifierTokens(message))
    if (kYes.contains(t)) return true;
  return false;
}

struct StepResult {
  std::vector<std::string> messages;
  bool closed = false;
};

/// Executes bot definitions. Sessions are independent; the runtime is safe
/// for concurrent use across sessions.
class BotRuntime {
 public:
  BotRuntime(BotDefinition def, IntentModel model, ErrorInjectionConfig injection = {}, RuntimeOptions options = {})
      : def_(std::move(def)), model_(std::move(model)), injection_(std::move(injection)),
        options_(std::move(options)) {}

  ChatStart Start(const std::string& hint) {
    auto session = std::make_shared<Session>();
    session->hint = hint;
    session->rng = Rng(DeriveSeed(injection_.seed, hint));
    std::lock_guard lock(mutex_);
    std::string id = "session-" + std::to_string(++counter_);
    sessions_[id] = session;
    return {id, {options_.welcome_message}};
  }

  StepResult Step(const std::string& session_id, const std::string& user_message) {
    std::shared_ptr<Session> session;
    {
      std::lock_guard lock(mutex_);
      auto it = sessions_.find(session_id);
      if (it == sessions_.end()) throw SessionClosed("unknown session '" + session_id + "'");
      session = it->second;
    }
    std::lock_guard session_lock(session->mutex);
    if (session->closed) throw SessionClosed("session '" + session_id + "' is closed");
    StepResult result;
    if (!session->dialog) {
      auto intent = Route(user_message);
      if (!intent) {
        result.messages.push_back(options_.fallback_message);
        return result;
      }
      session->dialog = def_.FindIntent(*intent)->entry_dialog;
      session->step = 0;
      Advance(*session, result);
      return result;
    }

    const DialogDefinition& dialog = *def_.FindDialog(*session->dialog);
    const MessageStep& step = dialog.steps[session->step];
    if (step.action == StepAction::kCollect) {
      {
        std::lock_guard lock(mutex_);
        ++attempts_[*step.slot];
      }
      // The draw happens for every attempt so that per-session streams do
      // not depend on configured probabilities.
      const bool miss = session->rng.Uniform01() < injection_.MissProbability(*step.slot);
      const EntityDefinition* entity = def_.FindEntity(*step.entity_type);
      auto value = ExtractEntity(*entity, user_message);
      if (miss) {
        std::lock_guard lock(mutex_);
        injections_.push_back({session->hint, dialog.name, *step.slot});
      } else if (!value) {
        std::lock_guard lock(mutex_);
        ++extraction_failures_;
      }
      if (miss || !value) {
        result.messages.push_back(Render(step.text, *session));
        return result;
      }
      session->collected[*step.slot] = *value;
      ++session->step;
      Advance(*session, result);
      return result;
    }
    if (step.action == StepAction::kConfirm) {
      if (IsAffirmative(user_message)) {
        ++session->step;
        Advance(*session, result);
        return result;
      }
      for (const auto& t : dialog.transitions)
        if (t.condition == TransitionCondition::kOnFailure) {
          session->dialog = t.target;
          session->step = 0;
          Advance(*session, result);
          return result;
        }
      result.messages.push_back(Render(step.text, *session));
      return result;
    }
    Advance(*session, result);
    return result;
  }

  void End(const std::string& session_id) {
    std::lock_guard lock(mutex_);
    sessions_.erase(session_id);
  }

  std::vector<InjectionEvent> injections() const {
    std::lock_guard lock(mutex_);
    return injections_;
  }
  std::map<std::string, std::size_t> extraction_attempts() const {
    std::lock_guard lock(mutex_);
    return attempts_;
  }
  std::size_t extraction_failures() const {
    std::lock_guard lock(mutex_);
    return extraction_failures_;
  }

  Json LogToJson() const {
    std::lock_guard lock(mutex_);
    Json events = Json::array();
    for (const auto& e : injections_) events.push_back({{"hint", e.hint}, {"dialog", e.dialog}, {"slot", e.slot}});
    std::sort(events.begin(), events.end());
    return Json{{"injections", events}, {"extraction_attempts", attempts_}, {"extraction_failures", extraction_failures_}};
  }

  const BotDefinition& definition() const noexcept { return def_; }
  const IntentModel& model() const noexcept { return model_; }

 private:
  struct Session {
    std::mutex mutex;
    std::string hint;
    Rng rng{0};
    std::optional<std::string> dialog;
    std::size_t step = 0;
    std::map<std::string, std::string> collected;
    bool closed = false;
  };

  std::optional<std::string> Route(const std::string& message) const {
    const std::string lower = ToLower(message);
    for (const auto& [needle, intent] : injection_.forced_intent_map)
      if (lower.find(ToLower(needle)) != std::string::npos && def_.FindIntent(intent)) return intent;
    auto c = model_.Classify(message);
    if (c.intent && def_.FindIntent(*c.intent)) return c.intent;
    return std::nullopt;
  }

  std::string Render(const std::string& text, const Session& s) const {
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto open = text.find('{', pos);
      auto close = open == std::string::npos ? std::string::npos : text.find('}', open);
      if (close == std::string::npos) break;
      out.append(text, pos, open - pos);
      const std::string name = text.substr(open + 1, close - open - 1);
      if (auto it = s.collected.find(name); it != s.collected.end()) out += it->second;
      else if (name == "bot_name") out += def_.name;
      else if (name == "date") out += "today";
      else if (name == "status") out += "open";
      else out += "unknown";
      pos = close + 1;
    }
    out.append(text, std::min(pos, text.size()), std::string::npos);
    return out;
  }

  /// Emits messages from the current step until a step needs user input or
  /// the conversation ends.
  void Advance(Session& s, StepResult& result) const {
    for (std::size_t hops = 0; hops < options_.max_transitions_per_turn; ++hops) {
      const DialogDefinition& dialog = *def_.FindDialog(*s.dialog);
      while (s.step < dialog.steps.size()) {
        const auto& step = dialog.steps[s.step];
        result.messages.push_back(Render(step.text, s));
        if (step.action != StepAction::kSay) return;
        ++s.step;
      }
      const TransitionRule* next = nullptr;
      for (const auto& t : dialog.transitions)
        if (t.condition == TransitionCondition::kOnSuccess) {
          next = &t;
          break;
        }
      if (!next)
        for (const auto& t : dialog.transitions)
          if (t.condition == TransitionCondition::kAlways) {
            next = &t;
            break;
          }
      if (!next) {
        s.closed = true;
        result.closed = true;
        return;
      }
      s.dialog = next->target;
      s.step = 0;
    }
    s.closed = true;
    result.closed = true;
  }

  BotDefinition def_;
  IntentModel model_;
  ErrorInjectionConfig injection_;
  RuntimeOptions options_;

  mutable std::mutex mutex_;
  std::uint64_t counter_ = 0;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::vector<InjectionEvent> injections_;
  std::map<std::string, std::size_t> attempts_;
  std::size_t extraction_failures_ = 0;
};

/// In-process ChatClient over a BotRuntime; no network involved.
class InProcessChatClient : public ChatClient {
 public:
  explicit InProcessChatClient(BotRuntime& runtime) : runtime_(runtime) {}

  ChatStart StartSession(const std::string& hint) override { return runtime_.Start(hint); }
  ChatReply Send(const std::string& session_id, const std::string& text) override {
    try {
      auto r = runtime_.Step(session_id, text);
      return {std::move(r.messages), r.closed};
    } catch (const SessionClosed& e) {
      throw TransportError(e.what());
    }
  }
  void EndSession(const std::string& session_id) override { runtime_.End(session_id); }

 private:
  BotRuntime& runtime_;
};

}  // namespace dialogforge

#endif  // DIALOGFORGE_RUNTIME_RUNTIME_HPP
