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

#include <gtest/gtest.h>

#include <random>

#include "dialogforge/runtime.hpp"
#include "dialogforge/simulator.hpp"
#include "support.hpp"

namespace dialogforge {
namespace {

using testing::FixtureBot;
using testing::Revised;

// ---------------------------------------------------------------------------
// NLU

TEST(NluTest, SimilarityIsJaccardOverTokens) {
  EXPECT_DOUBLE_EQ(TokenSetSimilarity("Hello there.", "hello THERE"), 1.0);
  EXPECT_DOUBLE_EQ(TokenSetSimilarity("a b c", "a b d"), 2.0 / 4.0);
  EXPECT_DOUBLE_EQ(TokenSetSimilarity("", ""), 0.0);
}

TEST(NluTest, WildcardAbsorbsOneToken) {
  EXPECT_DOUBLE_EQ(TokenSetSimilarity("Order 123456 is on its way.", "Order {*} is on its way."), 1.0);
  // Unused wildcard counts against the union.
  EXPECT_DOUBLE_EQ(TokenSetSimilarity("Order is on its way", "Order {*} is on its way"), 5.0 / 6.0);
}

TEST(NluTest, MatchesRequestActAboveThreshold) {
  auto f = Revised();
  const auto& map = *std::find_if(f.maps.begin(), f.maps.end(), [](auto& m) { return m.dialog == "Check_Order_Status"; });
  auto m = MatchDialogAct("What is your order number?", map);
  EXPECT_EQ(m.act, "request_OrderNumber");
  EXPECT_EQ(m.dialog, "Check_Order_Status");
  EXPECT_FALSE(MatchDialogAct("Would you like a cookie?", map).matched());
}

TEST(NluTest, GoalNluSeesForeignIntentConfirmations) {
  auto f = Revised();
  const auto& own = *std::find_if(f.maps.begin(), f.maps.end(), [](auto& m) { return m.dialog == "Report_Issue"; });
  GoalNlu nlu(own, f.maps, kDefaultFuzzyThreshold);
  auto m = nlu.Match("I can help you track your order.");
  EXPECT_EQ(m.act, kIntentSuccessAct);
  EXPECT_EQ(m.dialog, "Check_Order_Status");
  EXPECT_EQ(nlu.Match("Thanks for chatting with us. Goodbye!").act, kDialogSuccessAct);
}

TEST(NluTest, ResultDoesNotDependOnCandidateOrder) {
  DialogActMap map;
  map.dialog = "D";
  map.entries["say"] = {"your request is done"};
  map.entries["request_X"] = {"your request is done"};
  map.dialog_success_message = {"your request is done"};
  auto forward = MatchDialogAct("your request is done", map);
  std::swap(map.entries["say"], map.entries["request_X"]);
  map.entries["say"] = {"your request is done"};
  EXPECT_EQ(MatchDialogAct("your request is done", map).act, forward.act);
  EXPECT_EQ(forward.act, kDialogSuccessAct);
}

// ---------------------------------------------------------------------------
// Agenda policy

SimulationGoal MakeGoal() {
  SimulationGoal g;
  g.goal_id = "g1";
  g.intent = "Check_Order_Status";
  g.dialog = "Check_Order_Status";
  g.intent_query = "where is my order";
  g.inform_slots = {{"OrderNumber", "1234"}};
  return g;
}

NluMatch Act(std::string act, std::string dialog = "Check_Order_Status") {
  NluMatch m;
  m.act = std::move(act);
  m.dialog = std::move(dialog);
  m.score = 1.0;
  return m;
}

TEST(AgendaTest, InitialStackHasIntentOnTopAndByeAtBottom) {
  auto s = InitialAgenda(MakeGoal(), 20);
  EXPECT_EQ(s.Snapshot(), (std::vector<std::string>{"inform_intent", "inform_slot:OrderNumber", "bye"}));
}

TEST(AgendaTest, HappyPath) {
  auto s = InitialAgenda(MakeGoal(), 20);
  auto first = NextUserActs(s, NluMatch{});
  ASSERT_EQ(first.size(), 1u);
  EXPECT_EQ(first[0].kind, UserActKind::kInformIntent);
  s.turn_index = 1;
  EXPECT_TRUE(NextUserActs(s, Act(std::string(kIntentSuccessAct))).empty());
  EXPECT_EQ(s.predicted_dialog, "Check_Order_Status");
  auto inform = NextUserActs(s, Act("request_OrderNumber"));
  ASSERT_EQ(inform.size(), 1u);
  EXPECT_EQ(inform[0].value, "1234");
  s.turn_index = 2;
  NextUserActs(s, Act(std::string(kDialogSuccessAct)));
  EXPECT_EQ(s.outcome, Outcome::kSuccess);
  EXPECT_TRUE(s.agenda.empty());
  EXPECT_THROW(NextUserActs(s, Act("say")), IllegalState);
}

TEST(AgendaTest, ForeignIntentConfirmationIsIntentError) {
  auto s = InitialAgenda(MakeGoal(), 20);
  s.turn_index = 1;
  NextUserActs(s, Act(std::string(kIntentSuccessAct), "Report_Issue"));
  EXPECT_EQ(s.outcome, Outcome::kIntentError);
  EXPECT_EQ(s.predicted_dialog, "Report_Issue");
  EXPECT_EQ(s.error_turn, 1);
}

TEST(AgendaTest, RepeatedRequestIsNerError) {
  auto s = InitialAgenda(MakeGoal(), 20);
  s.turn_index = 1;
  NextUserActs(s, Act("request_OrderNumber"));
  s.turn_index = 2;
  NextUserActs(s, Act("request_OrderNumber"));
  EXPECT_EQ(s.outcome, Outcome::kNerError);
  EXPECT_EQ(s.error_turn, 2);
}

TEST(AgendaTest, ConfirmIsAffirmedAndUnmatchedIsOtherError) {
  auto s = InitialAgenda(MakeGoal(), 20);
  s.turn_index = 1;
  auto acts = NextUserActs(s, Act("confirm_OrderNumber"));
  ASSERT_EQ(acts.size(), 1u);
  EXPECT_EQ(acts[0].kind, UserActKind::kConfirmAffirm);
  NextUserActs(s, NluMatch{});
  EXPECT_EQ(s.outcome, Outcome::kOtherError);
}

TEST(AgendaTest, UndefinedSlotRequestIsOtherError) {
  auto s = InitialAgenda(MakeGoal(), 20);
  s.turn_index = 1;
  NextUserActs(s, Act("request_Email"));
  EXPECT_EQ(s.outcome, Outcome::kOtherError);
}

TEST(AgendaTest, TurnBudget) {
  auto s = InitialAgenda(MakeGoal(), 3);
  s.turn_index = 3;
  NextUserActsForTurn(s, {Act("say")});
  EXPECT_EQ(s.outcome, Outcome::kMaxTurnsExceeded);
}

TEST(AgendaTest, SayOnlyTurnStalls) {
  auto s = InitialAgenda(MakeGoal(), 20);
  s.turn_index = 1;
  NextUserActsForTurn(s, {Act("say")});
  EXPECT_EQ(s.outcome, Outcome::kOtherError);
}

// ---------------------------------------------------------------------------
// NLG

TEST(NlgTest, InformIntentIsVerbatim) {
  EXPECT_EQ(Realize(UserDialogAct::InformIntent("Track my order"), ResponseTemplateSet::Default(), 1), "Track my order");
}

TEST(NlgTest, ConfirmAffirmPickPinned) {
  ResponseTemplateSet set = ResponseTemplateSet::Default();
  set.templates["confirm_affirm"] = {"yes", "yes, that is right", "correct"};
  Json picks = Json::array();
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) picks.push_back(Realize(UserDialogAct::ConfirmAffirm(), set, seed));
  EXPECT_EQ(Realize(UserDialogAct::ConfirmAffirm(), set, 3), picks[2].get<std::string>());
  testing::ExpectGolden("simulator/confirm_affirm_picks.json", DumpJson(picks));
}

TEST(NlgTest, SlotSpecificTemplateWins) {
  ResponseTemplateSet set = ResponseTemplateSet::Default();
  set.templates["inform_slot:Email"] = {"mail me at {value}"};
  EXPECT_EQ(Realize(UserDialogAct::InformSlot("Email", "a@b.co"), set, 9), "mail me at a@b.co");
}

TEST(NlgTest, MissingTemplateThrows) {
  ResponseTemplateSet set;
  EXPECT_THROW(Realize(UserDialogAct::Bye(), set, 1), MissingTemplate);
  EXPECT_THROW(ResponseTemplateSetFromJson(Json{{"bye", {"bye"}}}), SchemaError);
}

// ---------------------------------------------------------------------------
// Intent model

TEST(IntentModelTest, TrainingUtterancesClassifyToTheirIntent) {
  auto model = IntentModel::Train(FixtureBot().intents);
  for (const auto& i : FixtureBot().intents)
    for (const auto& u : i.training_utterances) {
      auto c = model.Classify(u);
      ASSERT_TRUE(c.intent) << u;
      EXPECT_EQ(*c.intent, i.name) << u;
    }
}

TEST(IntentModelTest, OutOfVocabularyFallsBack) {
  auto model = IntentModel::Train(FixtureBot().intents);
  EXPECT_FALSE(model.Classify("zzqx blorf").intent);
  EXPECT_FALSE(model.Classify("").intent);
}

TEST(IntentModelTest, JsonRoundTripClassifiesIdentically) {
  auto model = IntentModel::Train(FixtureBot().intents);
  auto loaded = IntentModel::FromJson(ParseJson(model.ToJson().dump()));
  const Json eval = ReadJsonFile(testing::FixtureDir() / "eval_utterances.json");
  for (const auto& [intent, list] : eval.items())
    for (const auto& u : list) {
      auto a = model.Classify(u.get<std::string>());
      auto b = loaded.Classify(u.get<std::string>());
      EXPECT_EQ(a.intent, b.intent);
      EXPECT_DOUBLE_EQ(a.confidence, b.confidence);
    }
}

TEST(IntentModelTest, SharedUtteranceWarns) {
  auto model = IntentModel::Train(std::map<std::string, std::vector<std::string>>{
      {"A", {"hello", "open a case"}}, {"B", {"hello", "close it"}}});
  ASSERT_EQ(model.warnings().size(), 1u);
  EXPECT_NE(model.warnings()[0].find("hello"), std::string::npos);
}

TEST(IntentModelTest, EmptyTrainingSetThrows) {
  EXPECT_THROW(IntentModel::Train(std::map<std::string, std::vector<std::string>>{}), EmptyTrainingSet);
  EXPECT_THROW(IntentModel::Train(std::map<std::string, std::vector<std::string>>{{"A", {}}}), EmptyTrainingSet);
}

TEST(IntentModelTest, HeldOutAccuracyPinned) {
  auto model = IntentModel::Train(FixtureBot().intents);
  const Json eval = ReadJsonFile(testing::FixtureDir() / "eval_utterances.json");
  std::size_t correct = 0;
  std::size_t total = 0;
  for (const auto& [intent, list] : eval.items())
    for (const auto& u : list) {
      ++total;
      auto c = model.Classify(u.get<std::string>());
      if (c.intent == intent) ++correct;
    }
  EXPECT_EQ(total, 600u);
  char accuracy[16];
  std::snprintf(accuracy, sizeof accuracy, "%.4f", static_cast<double>(correct) / static_cast<double>(total));
  testing::ExpectGolden("simulator/heldout_accuracy.json",
                        DumpJson(Json{{"correct", correct}, {"total", total}, {"accuracy", accuracy}}));
}

// ---------------------------------------------------------------------------
// Runtime

TEST(RuntimeTest, ExtractsEntitiesByKind) {
  EXPECT_EQ(ExtractEntity({"E", EntityKind::kEmail, {}}, "it is bob@example.com thanks"), "bob@example.com");
  EXPECT_EQ(ExtractEntity({"N", EntityKind::kNumber, {}}, "sure, it is 4711"), "4711");
  EXPECT_EQ(ExtractEntity({"I", EntityKind::kAlphanumericId, {}}, "here you go: QM0HLX07"), "QM0HLX07");
  EXPECT_EQ(ExtractEntity({"P", EntityKind::kEnumeration, {"Pro", "Professional"}}, "the professional one"),
            "Professional");
  EXPECT_FALSE(ExtractEntity({"E", EntityKind::kEmail, {}}, "no idea"));
  EXPECT_FALSE(ExtractEntity({"N", EntityKind::kNumber, {}}, "none"));
}

TEST(RuntimeTest, OrderStatusConversation) {
  BotRuntime runtime(FixtureBot(), IntentModel::Train(FixtureBot().intents));
  auto start = runtime.Start("hint");
  ASSERT_EQ(start.messages.size(), 1u);
  auto r1 = runtime.Step(start.session_id, "where is my order");
  EXPECT_EQ(r1.messages, (std::vector<std::string>{"I can help you track your order.", "What is your order number?"}));
  auto r2 = runtime.Step(start.session_id, "it is 4711");
  EXPECT_EQ(r2.messages,
            (std::vector<std::string>{"Order 4711 is on its way.", "Thanks for chatting with us. Goodbye!"}));
  EXPECT_TRUE(r2.closed);
  EXPECT_THROW(runtime.Step(start.session_id, "hello?"), SessionClosed);
  EXPECT_THROW(runtime.Step("nope", "hello?"), SessionClosed);
}

TEST(RuntimeTest, FallbackThenRecovery) {
  BotRuntime runtime(FixtureBot(), IntentModel::Train(FixtureBot().intents));
  auto s = runtime.Start("h").session_id;
  EXPECT_EQ(runtime.Step(s, "zzqx blorf").messages, std::vector<std::string>{RuntimeOptions{}.fallback_message});
  EXPECT_EQ(runtime.Step(s, "where is my order").messages.front(), "I can help you track your order.");
}

TEST(RuntimeTest, DeclinedConfirmationFollowsFailureTransition) {
  BotRuntime runtime(FixtureBot(), IntentModel::Train(FixtureBot().intents));
  auto s = runtime.Start("h").session_id;
  runtime.Step(s, "report a bug");
  runtime.Step(s, "a@b.co");
  runtime.Step(s, "the app crashes");
  auto r = runtime.Step(s, "no");
  EXPECT_EQ(r.messages.front(), "I can connect you with one of our support agents.");
}

TEST(RuntimeTest, ForcedIntentMapOverridesClassifier) {
  ErrorInjectionConfig injection;
  injection.forced_intent_map = {{"order", "Report_Issue"}};
  BotRuntime runtime(FixtureBot(), IntentModel::Train(FixtureBot().intents), injection);
  auto s = runtime.Start("h").session_id;
  EXPECT_EQ(runtime.Step(s, "where is my order").messages.front(),
            "I am sorry you ran into a problem. Let's open a new case.");
}

TEST(RuntimeTest, CertainMissLogsEveryAttempt) {
  ErrorInjectionConfig injection;
  injection.ner_miss_probability = {{"OrderNumber", 1.0}};
  BotRuntime runtime(FixtureBot(), IntentModel::Train(FixtureBot().intents), injection);
  auto s = runtime.Start("h").session_id;
  runtime.Step(s, "where is my order");
  EXPECT_EQ(runtime.Step(s, "4711").messages, std::vector<std::string>{"What is your order number?"});
  EXPECT_EQ(runtime.Step(s, "4711").messages, std::vector<std::string>{"What is your order number?"});
  EXPECT_EQ(runtime.injections().size(), 2u);
  EXPECT_EQ(runtime.extraction_attempts().at("OrderNumber"), 2u);
}

TEST(RuntimeTest, InjectionConfigValidation) {
  EXPECT_THROW(ErrorInjectionConfigFromJson(Json{{"ner_miss_probability", 1.5}}), SchemaError);
  auto c = ErrorInjectionConfigFromJson(Json{{"ner_miss_probability", 0.25}});
  EXPECT_DOUBLE_EQ(c.MissProbability("Anything"), 0.25);
}

// ---------------------------------------------------------------------------
// Runner

/// Fails every call after `budget` calls.
class FlakyClient : public ChatClient {
 public:
  FlakyClient(ChatClient& inner, int budget) : inner_(inner), budget_(budget) {}
  ChatStart StartSession(const std::string& hint) override {
    Spend();
    return inner_.StartSession(hint);
  }
  ChatReply Send(const std::string& id, const std::string& text) override {
    Spend();
    return inner_.Send(id, text);
  }
  void EndSession(const std::string& id) override { inner_.EndSession(id); }

 private:
  void Spend() {
    if (budget_-- <= 0) throw TransportError("connection reset");
  }
  ChatClient& inner_;
  int budget_;
};

TEST(RunnerTest, CleanRunSucceedsAndIsOrderIndependent) {
  auto f = Revised();
  auto goals = f.UtteranceGoals(20);
  BotRuntime runtime(FixtureBot(), IntentModel::Train(FixtureBot().intents));
  InProcessChatClient client(runtime);
  SimulationConfig config;
  config.parallelism = 4;
  auto parallel = RunSimulation(goals, f.maps, ResponseTemplateSet::Default(), client, config, f.DialogIntents());
  config.parallelism = 1;
  auto serial = RunSimulation(goals, f.maps, ResponseTemplateSet::Default(), client, config, f.DialogIntents());
  ASSERT_EQ(parallel.size(), goals.size());
  EXPECT_EQ(parallel, serial);
  for (std::size_t i = 0; i < goals.size(); ++i) {
    EXPECT_EQ(parallel[i].goal_id, goals[i].goal_id);
    EXPECT_EQ(parallel[i].outcome, Outcome::kSuccess) << goals[i].goal_id;
    EXPECT_EQ(parallel[i].predicted_intent, goals[i].intent);
    EXPECT_EQ(parallel[i].informed, goals[i].inform_slots);
    EXPECT_EQ(parallel[i].turns.size(), parallel[i].agenda_trace.size());
  }
}

TEST(RunnerTest, TransportFailureIsRecordedNotThrown) {
  auto f = Revised();
  auto goals = f.UtteranceGoals(1);
  BotRuntime runtime(FixtureBot(), IntentModel::Train(FixtureBot().intents));
  InProcessChatClient inner(runtime);
  FlakyClient flaky(inner, 3);
  auto episodes = RunSimulation(goals, f.maps, ResponseTemplateSet::Default(), flaky, SimulationConfig{});
  ASSERT_EQ(episodes.size(), goals.size());
  EXPECT_EQ(episodes.back().outcome, Outcome::kAborted);
  EXPECT_TRUE(episodes.back().transport_error);
}

TEST(RunnerTest, MisroutedQueryIsIntentError) {
  auto f = Revised();
  QueryPool pool{{"Check_Order_Status", {{"please open a new case for my broken app", std::nullopt}}}};
  auto goals = f.Goals(pool, 10);
  BotRuntime runtime(FixtureBot(), IntentModel::Train(FixtureBot().intents));
  InProcessChatClient client(runtime);
  auto episodes = RunSimulation(goals, f.maps, ResponseTemplateSet::Default(), client, SimulationConfig{},
                                f.DialogIntents());
  ASSERT_EQ(episodes.size(), 1u);
  EXPECT_EQ(episodes[0].outcome, Outcome::kIntentError);
  EXPECT_EQ(episodes[0].predicted_intent, "Report_Issue");
}

TEST(RunnerTest, UnrevisedMapsAreRefused) {
  auto f = Revised();
  f.maps[2].revised = false;
  BotRuntime runtime(FixtureBot(), IntentModel::Train(FixtureBot().intents));
  InProcessChatClient client(runtime);
  EXPECT_THROW(RunSimulation(f.UtteranceGoals(1), f.maps, ResponseTemplateSet::Default(), client, SimulationConfig{}),
               UnrevisedMapError);
}

TEST(RunnerTest, InjectedMissesMatchNerErrors) {
  auto f = Revised();
  auto goals = f.UtteranceGoals(40);
  ErrorInjectionConfig injection;
  injection.ner_miss_probability = {{"*", 0.3}};
  injection.seed = 17;
  BotRuntime runtime(FixtureBot(), IntentModel::Train(FixtureBot().intents), injection);
  InProcessChatClient client(runtime);
  SimulationConfig config;
  config.parallelism = 4;
  auto episodes = RunSimulation(goals, f.maps, ResponseTemplateSet::Default(), client, config, f.DialogIntents());
  std::size_t ner = 0;
  for (const auto& e : episodes) ner += e.outcome == Outcome::kNerError;
  EXPECT_GT(ner, 0u);
  EXPECT_EQ(ner, runtime.injections().size());
}

TEST(EpisodeTest, JsonRoundTrip) {
  auto f = Revised();
  BotRuntime runtime(FixtureBot(), IntentModel::Train(FixtureBot().intents));
  InProcessChatClient client(runtime);
  auto episodes = RunSimulation(f.UtteranceGoals(2), f.maps, ResponseTemplateSet::Default(), client,
                                SimulationConfig{}, f.DialogIntents());
  testing::TempDir dir;
  WriteFile(dir / "e.jsonl", EpisodesToJsonLines(episodes));
  EXPECT_EQ(ReadEpisodesFile(dir / "e.jsonl"), episodes);
}

}  // namespace
}  // namespace dialogforge
