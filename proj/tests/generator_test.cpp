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
#include <regex>

#include "dialogforge/app/pipeline.hpp"
#include "dialogforge/generator.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace dialogforge {
namespace {

using testing::FixtureBot;
using testing::TempDir;

Json MinimalBotJson() {
  return ParseJson(R"({
    "schema_version": 1,
    "name": "Mini",
    "dialogs": [
      {"name": "Greet", "steps": [{"text": "Hello there.", "action": "Say"},
                                  {"text": "What is your email?", "action": "Collect", "slot": "Email",
                                   "entity_type": "Email"}],
       "transitions": [{"target": "Done", "condition": "always"}]},
      {"name": "Done", "steps": [{"text": "Sent to {Email}. Bye!", "action": "Say"}], "transitions": []}
    ],
    "intents": [{"name": "Hello", "entry_dialog": "Greet", "training_utterances": ["hi", "hello"]}],
    "entities": [{"name": "Email", "kind": "email"}],
    "success_dialogs": ["Done"]
  })");
}

std::vector<std::string> ViolationCodes(const Json& doc) {
  try {
    LoadBotDefinitionFromString(doc.dump());
  } catch (const ValidationError& e) {
    std::vector<std::string> codes;
    for (const auto& v : e.violations()) codes.push_back(v.code);
    return codes;
  }
  return {};
}

// ---------------------------------------------------------------------------
// Bot schema

TEST(BotSchemaTest, FixtureLoadsWithSixIntentsOf150Utterances) {
  const auto& bot = FixtureBot();
  ASSERT_EQ(bot.intents.size(), 6u);
  for (const auto& i : bot.intents) EXPECT_EQ(i.training_utterances.size(), 150u) << i.name;
  EXPECT_TRUE(Validate(bot).empty());
}

TEST(BotSchemaTest, RoundTripIsIdentity) {
  const auto& bot = FixtureBot();
  EXPECT_EQ(BotDefinitionFromJson(ToJson(bot)), bot);
  EXPECT_EQ(DumpJson(ToJson(BotDefinitionFromJson(ToJson(bot)))), DumpJson(ToJson(bot)));
}

TEST(BotSchemaTest, MalformedJsonIsSyntaxError) {
  EXPECT_THROW(LoadBotDefinitionFromString("{\"name\": "), SyntaxError);
}

TEST(BotSchemaTest, UnknownFieldIsSchemaError) {
  auto doc = MinimalBotJson();
  doc["colour"] = "blue";
  EXPECT_THROW(LoadBotDefinitionFromString(doc.dump()), SchemaError);
}

TEST(BotSchemaTest, WrongTypeIsSchemaError) {
  auto doc = MinimalBotJson();
  doc["dialogs"] = "none";
  EXPECT_THROW(LoadBotDefinitionFromString(doc.dump()), SchemaError);
}

TEST(BotSchemaTest, ReportsEveryViolationWithPath) {
  auto doc = MinimalBotJson();
  doc["dialogs"][0]["transitions"].push_back({{"target", "Nowhere"}, {"condition", "always"}});
  doc["dialogs"][1]["steps"][0]["text"] = "Hi {Unknown}";
  doc["intents"][0]["entry_dialog"] = "Missing";
  try {
    LoadBotDefinitionFromString(doc.dump());
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    std::set<std::string> codes;
    for (const auto& v : e.violations()) codes.insert(v.code);
    EXPECT_TRUE(codes.contains("UnknownTransitionTarget"));
    EXPECT_TRUE(codes.contains("MultipleAlwaysTransitions"));
    EXPECT_TRUE(codes.contains("UnknownPlaceholder"));
    EXPECT_TRUE(codes.contains("UnknownEntryDialog"));
    for (const auto& v : e.violations()) EXPECT_EQ(v.path.front(), '/');
  }
}

TEST(BotSchemaTest, DuplicateNamesAndMissingSlots) {
  auto doc = MinimalBotJson();
  doc["dialogs"].push_back(doc["dialogs"][1]);
  doc["dialogs"][0]["steps"][1].erase("slot");
  auto codes = ViolationCodes(doc);
  EXPECT_NE(std::find(codes.begin(), codes.end(), "DuplicateDialogName"), codes.end());
  EXPECT_NE(std::find(codes.begin(), codes.end(), "MissingSlot"), codes.end());
}

TEST(BotSchemaTest, UtteranceSidecarMergesWithoutDuplicates) {
  Json sidecar = {{"Hello", {"hi", "good morning"}}};
  auto def = LoadBotDefinitionFromString(MinimalBotJson().dump(), &sidecar);
  EXPECT_EQ(def.intents[0].training_utterances, (std::vector<std::string>{"hi", "hello", "good morning"}));
}

// ---------------------------------------------------------------------------
// Local parsing and the conversation graph

TEST(ParserTest, LocalMapClassifiesSteps) {
  auto def = LoadBotDefinitionFromString(MinimalBotJson().dump());
  auto local = ParseLocalMaps(def);
  const auto& greet = local.at("Greet");
  EXPECT_EQ(greet.entries.at("say"), std::vector<std::string>{"Hello there."});
  EXPECT_EQ(greet.entries.at("request_Email"), std::vector<std::string>{"What is your email?"});
  EXPECT_EQ(local.at("Done").entries.at("say"), std::vector<std::string>{"Sent to {*}. Bye!"});
}

TEST(ParserTest, SuccessActsOfMinimalBot) {
  auto parsed = ParseBot(LoadBotDefinitionFromString(MinimalBotJson().dump()));
  ASSERT_EQ(parsed.maps.size(), 1u);
  EXPECT_EQ(parsed.maps[0].intent_success_message, std::vector<std::string>{"Hello there."});
  EXPECT_EQ(parsed.maps[0].dialog_success_message, std::vector<std::string>{"Sent to {*}. Bye!"});
  EXPECT_FALSE(parsed.maps[0].revised);
}

TEST(ParserTest, FixtureYieldsSixMapsAndAggregatesSubDialogs) {
  auto parsed = ParseBot(FixtureBot());
  ASSERT_EQ(parsed.maps.size(), 6u);
  const auto it = std::find_if(parsed.maps.begin(), parsed.maps.end(),
                               [](const auto& m) { return m.dialog == "Check_Issue_Status"; });
  ASSERT_NE(it, parsed.maps.end());
  // The case number is asked for in the Case_Lookup sub-dialog.
  EXPECT_TRUE(it->entries.contains("request_CaseNumber"));
  EXPECT_TRUE(it->entries.contains("request_Email"));
  EXPECT_EQ(it->intent_success_message, std::vector<std::string>{"Let me look up the status of your case."});
}

TEST(ParserTest, FixtureMatchesGoldens) {
  TempDir dir;
  Workdir wd(dir.path());
  ParseStage(FixtureBot(), wd, PipelineConfig{});
  const auto golden = testing::GoldenDir() / "parse";
  EXPECT_EQ(ReadFile(wd.graph()), ReadFile(golden / "graph.json"));
  EXPECT_EQ(ReadFile(wd.ontology()), ReadFile(golden / "ontology.json"));
  std::size_t maps = 0;
  for (const auto& entry : std::filesystem::directory_iterator(golden / "maps")) {
    ++maps;
    EXPECT_EQ(ReadFile(wd.maps_dir() / entry.path().filename()), ReadFile(entry.path())) << entry.path();
  }
  EXPECT_EQ(maps, 6u);
}

TEST(GraphTest, JsonRoundTrip) {
  auto graph = BuildGraph(FixtureBot());
  EXPECT_EQ(ConversationGraphFromJson(ToJson(graph)), graph);
}

TEST(GraphTest, EdgeToUnknownVertexThrows) {
  EXPECT_THROW(ConversationGraph({GraphVertex{"A", false, {}, {}}}, {{"A", "B", TransitionCondition::kAlways}}, {}),
               UnknownVertex);
}

TEST(AggregationTest, UnreachableSuccessIsNoPathError) {
  ConversationGraph g({GraphVertex{"A", false, {}, {}}, GraphVertex{"B", false, {}, {}}}, {}, {"B"});
  EXPECT_THROW(AggregateMap(g, "A", {"B"}), NoPathError);
}

TEST(AggregationTest, EntryCandidatesComeFirstThenGraphOrder) {
  auto vertex = [](std::string name, std::string text) {
    GraphVertex v{name, false, {}, {}};
    v.local_map.entries["say"] = {text};
    return v;
  };
  ConversationGraph g({vertex("Z", "z"), vertex("M", "m"), vertex("A", "a"), vertex("Dead", "dead")},
                      {{"M", "Z", TransitionCondition::kAlways},
                       {"M", "A", TransitionCondition::kOnFailure},
                       {"M", "Dead", TransitionCondition::kOnSuccess},
                       {"Z", "A", TransitionCondition::kAlways}},
                      {"A"});
  auto map = AggregateMap(g, "M", {"A"});
  EXPECT_EQ(map.entries.at("say"), (std::vector<std::string>{"m", "z", "a"}));
}

TEST(AggregationTest, MatchesBruteForceOnRandomGraphs) {
  std::mt19937_64 rng(1234);
  for (int round = 0; round < 60; ++round) {
    auto [graph, success] = testing::MakeRandomGraph(rng);
    for (const auto& v : graph.vertices()) {
      auto expected = testing::BruteForceAggregate(graph, v.name, success);
      if (expected.empty() &&
          std::none_of(success.begin(), success.end(), [&](const auto& s) {
            return !testing::BruteForceSimplePaths(graph, v.name, s).empty();
          })) {
        EXPECT_THROW(AggregateMap(graph, v.name, success), NoPathError);
        continue;
      }
      auto actual = AggregateMap(graph, v.name, success);
      std::map<std::string, std::set<std::string>> as_sets;
      for (const auto& [act, list] : actual.entries) {
        as_sets[act].insert(list.begin(), list.end());
        EXPECT_EQ(as_sets[act].size(), list.size()) << "duplicate candidates for " << act;
      }
      EXPECT_EQ(as_sets, expected) << "round " << round << " dialog " << v.name;
    }
  }
}

// ---------------------------------------------------------------------------
// Ontology

TEST(OntologyTest, EmailSeed7PinnedAndWellFormed) {
  EntityDefinition email{"Email", EntityKind::kEmail, {}};
  auto values = GenerateEntityValues(email, 7);
  ASSERT_EQ(values.size(), 5u);
  static const std::regex kPattern(R"([a-z0-9]+@[a-z0-9]+\.[a-z]{2,})");
  for (const auto& v : values) EXPECT_TRUE(std::regex_match(v, kPattern)) << v;
  EXPECT_EQ(std::set<std::string>(values.begin(), values.end()).size(), 5u);
  testing::ExpectGolden("generator/email_seed7.json", DumpJson(Json(values)));
}

TEST(OntologyTest, KindsProduceTheirShapes) {
  auto numbers = GenerateEntityValues({"N", EntityKind::kNumber, {}}, 3);
  for (const auto& v : numbers) EXPECT_TRUE(std::all_of(v.begin(), v.end(), ::isdigit)) << v;
  auto ids = GenerateEntityValues({"Id", EntityKind::kAlphanumericId, {}}, 3);
  for (const auto& v : ids) EXPECT_EQ(v.size(), 8u);
  auto plans = GenerateEntityValues({"Plan", EntityKind::kEnumeration, {"Basic", "Pro"}}, 3);
  EXPECT_EQ(plans, (std::vector<std::string>{"Basic", "Pro"}));
}

TEST(OntologyTest, SeedSplitIsIndependentOfMapOrder) {
  auto parsed = ParseBot(FixtureBot());
  auto forward = ExtractOntology(FixtureBot(), parsed.maps, 11);
  std::reverse(parsed.maps.begin(), parsed.maps.end());
  EXPECT_EQ(ExtractOntology(FixtureBot(), parsed.maps, 11), forward);
  EXPECT_NE(ExtractOntology(FixtureBot(), parsed.maps, 12), forward);
}

TEST(OntologyTest, JsonRoundTrip) {
  auto parsed = ParseBot(FixtureBot());
  auto o = ExtractOntology(FixtureBot(), parsed.maps, 5);
  EXPECT_EQ(OntologyFromJson(ToJson(o)), o);
  EXPECT_THROW(OntologyFromJson(Json{{"seed", 1}}), SchemaError);
}

TEST(RevisionTest, AddRemoveOverrideAndMarkRevised) {
  auto parsed = ParseBot(FixtureBot());
  auto ontology = ExtractOntology(FixtureBot(), parsed.maps, 1);
  auto rev = RevisionDocumentFromJson(ParseJson(R"({
    "dialogs": {"Check_Issue_Status": {
      "add_entries": {"request_Email": ["Which email did you use?"]},
      "remove_entries": {"say": ["Let me look up the status of your case."]},
      "intent_success_message": ["Let me look up the status of your case."]}},
    "ontology": {"Check_Issue_Status": {"Email": ["a@b.co"]}}
  })"));
  ApplyRevisions(parsed.maps, ontology, rev);
  for (const auto& m : parsed.maps) EXPECT_TRUE(m.revised);
  const auto& m = *std::find_if(parsed.maps.begin(), parsed.maps.end(),
                                [](const auto& x) { return x.dialog == "Check_Issue_Status"; });
  EXPECT_EQ(m.entries.at("request_Email").back(), "Which email did you use?");
  const auto& say = m.entries.at("say");
  EXPECT_EQ(std::find(say.begin(), say.end(), "Let me look up the status of your case."), say.end());
  EXPECT_EQ(*ontology.Values("Check_Issue_Status", "Email"), std::vector<std::string>{"a@b.co"});
}

TEST(RevisionTest, UnknownReferencesThrow) {
  auto parsed = ParseBot(FixtureBot());
  auto ontology = ExtractOntology(FixtureBot(), parsed.maps, 1);
  auto bad_dialog = RevisionDocumentFromJson(ParseJson(R"({"dialogs": {"Nope": {}}})"));
  EXPECT_THROW(ApplyRevisions(parsed.maps, ontology, bad_dialog), UnknownTarget);
  auto bad_act = RevisionDocumentFromJson(ParseJson(R"({"dialogs": {"Report_Issue": {"remove_entries": {"x": []}}}})"));
  EXPECT_THROW(ApplyRevisions(parsed.maps, ontology, bad_act), UnknownTarget);
  auto bad_slot = RevisionDocumentFromJson(ParseJson(R"({"ontology": {"Report_Issue": {"Nope": ["v"]}}})"));
  EXPECT_THROW(ApplyRevisions(parsed.maps, ontology, bad_slot), UnknownTarget);
}

// ---------------------------------------------------------------------------
// Paraphrases

ParaphraseSet OrderStatusParaphrases(std::uint64_t seed) {
  return GenerateParaphrases({{"Check_Order_Status", "Check_Order_Status", {"check my order status"}}},
                             DefaultParaphraseConfig(seed));
}

TEST(ParaphraseTest, CheckMyOrderStatusPinned) {
  auto set = OrderStatusParaphrases(42);
  const auto& list = set.intents.at("Check_Order_Status").at("check my order status");
  EXPECT_FALSE(list.empty());
  EXPECT_LE(list.size(), DefaultParaphraseConfig().max_variants);
  testing::ExpectGolden("generator/paraphrase_check_my_order_status.json", DumpJson(ToJson(set)));
}

TEST(ParaphraseTest, VariantsAreDistinctAndExcludeOrigin) {
  const auto& bot = FixtureBot();
  auto set = GenerateParaphrases(bot.intents, DefaultParaphraseConfig(3));
  for (const auto& [intent, origins] : set.intents)
    for (const auto& [origin, list] : origins) {
      std::set<std::string> seen{NormalizeUtterance(origin)};
      for (const auto& p : list) EXPECT_TRUE(seen.insert(NormalizeUtterance(p)).second) << origin << " -> " << p;
    }
  EXPECT_EQ(ToJson(GenerateParaphrases(bot.intents, DefaultParaphraseConfig(3))), ToJson(set));
}

TEST(ParaphraseTest, IntentOrderDoesNotChangeOutput) {
  auto intents = FixtureBot().intents;
  auto forward = GenerateParaphrases(intents, DefaultParaphraseConfig(9));
  std::reverse(intents.begin(), intents.end());
  EXPECT_EQ(ToJson(GenerateParaphrases(intents, DefaultParaphraseConfig(9))), ToJson(forward));
}

TEST(ParaphraseTest, EmptyLexiconThrows) {
  auto config = DefaultParaphraseConfig();
  config.lexicon.clear();
  EXPECT_THROW(GenerateParaphrases(FixtureBot().intents, config), EmptyLexicon);
}

TEST(ParaphraseTest, IngestionKeepsOriginsAndDropsDuplicates) {
  auto set = IngestParaphrases(ParseJson(R"({"Report_Issue": {"report a bug": ["report a bug", "log a defect",
                                              "Log a  defect", "file a bug"]}})"));
  EXPECT_EQ(set.provenance, ParaphraseProvenance::kIngested);
  EXPECT_EQ(set.intents.at("Report_Issue").at("report a bug"), (std::vector<std::string>{"log a defect", "file a bug"}));
  auto pool = QueriesFromParaphrases(set);
  ASSERT_EQ(pool.at("Report_Issue").size(), 2u);
  EXPECT_EQ(pool.at("Report_Issue")[0].origin, "report a bug");
}

// ---------------------------------------------------------------------------
// Goals

using testing::Revised;

std::vector<GoalIntent> FixtureGoalIntents() { return Revised().intents; }

TEST(GoalTest, Cap100On150UtterancesGives600Goals) {
  auto f = Revised();
  auto goals = GenerateGoals(f.maps, f.ontology, FixtureGoalIntents(), QueriesFromUtterances(FixtureBot().intents),
                             100, 5);
  ASSERT_EQ(goals.size(), 600u);
  std::map<std::string, const DialogActMap*> by_dialog;
  for (const auto& m : f.maps) by_dialog[m.dialog] = &m;
  std::set<std::string> ids;
  for (const auto& g : goals) {
    EXPECT_TRUE(GoalConformsToMap(g, *by_dialog.at(g.dialog))) << g.goal_id;
    EXPECT_TRUE(ids.insert(g.goal_id).second);
    for (const auto& [slot, value] : g.inform_slots) {
      const auto& values = *f.ontology.Values(g.dialog, slot);
      EXPECT_NE(std::find(values.begin(), values.end(), value), values.end());
    }
  }
}

TEST(GoalTest, SmallPoolIsTakenWholeInOrder) {
  auto f = Revised();
  QueryPool pool{{"Report_Issue", {{"a", std::nullopt}, {"b", std::nullopt}}}};
  auto goals = GenerateGoals(f.maps, f.ontology, FixtureGoalIntents(), pool, 100, 5);
  ASSERT_EQ(goals.size(), 2u);
  EXPECT_EQ(goals[0].intent_query, "a");
  EXPECT_EQ(goals[1].goal_id, "Report_Issue-0002");
}

TEST(GoalTest, UnrevisedMapIsRefused) {
  auto f = Revised();
  f.maps[0].revised = false;
  EXPECT_THROW(GenerateGoals(f.maps, f.ontology, FixtureGoalIntents(), QueriesFromUtterances(FixtureBot().intents),
                             10, 5),
               UnrevisedMapError);
}

TEST(GoalTest, MissingOntologySlotThrows) {
  auto f = Revised();
  f.ontology.dialogs.at("Check_Order_Status").clear();
  EXPECT_THROW(GenerateGoals(f.maps, f.ontology, FixtureGoalIntents(), QueriesFromUtterances(FixtureBot().intents),
                             10, 5),
               MissingOntologyValue);
}

TEST(GoalTest, JsonLinesRoundTrip) {
  auto f = Revised();
  auto goals = GenerateGoals(f.maps, f.ontology, FixtureGoalIntents(), QueriesFromUtterances(FixtureBot().intents),
                             3, 5);
  TempDir dir;
  WriteFile(dir / "goals.jsonl", GoalsToJsonLines(goals));
  EXPECT_EQ(ReadGoalsFile(dir / "goals.jsonl"), goals);
}

}  // namespace
}  // namespace dialogforge
