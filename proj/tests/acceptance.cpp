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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any check fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "dialogforge/app.hpp"
#include "dialogforge/runtime/http.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace df = dialogforge;
namespace fs = std::filesystem;
using df::Json;
using df::testing::TempDir;

namespace {

/// Collects failure messages for one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void Note(std::string note) { notes_.push_back(std::move(note)); }
  bool ok() const { return failed_ == 0; }
  std::string Summary() const {
    std::ostringstream out;
    const auto& parts = ok() ? notes_ : failures_;
    for (std::size_t i = 0; i < parts.size(); ++i) out << (i ? "; " : "") << parts[i];
    if (failed_ > failures_.size()) out << "; +" << failed_ - failures_.size() << " more";
    return out.str();
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
  std::size_t failed_ = 0;
};

std::string Fixed(double v, int digits = 3) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

std::string Quote(const fs::path& p) { return "'" + p.string() + "'"; }

int RunCli(const TempDir& tmp, const std::string& args, std::string* err = nullptr) {
  const std::string cmd =
      "cd " + Quote(df::testing::SourceDir()) + " && " + Quote(DIALOGFORGE_CLI_PATH) + " " + args;
  int status = df::testing::RunCommand(cmd, tmp / "stdout.txt", tmp / "stderr.txt");
  if (err) *err = df::ReadFile(tmp / "stderr.txt");
  return status;
}

/// Runs parse, revise and generate in-process on the template bot.
df::PipelineConfig PrepareGoals(const df::Workdir& wd, const Json& overrides, const df::PipelineConfig& base = {}) {
  const auto config = df::PipelineConfigFromJson(overrides, base);
  df::PrepareOutputDir(wd.root(), true);
  df::ParseStage(df::testing::FixtureBot(), wd, config);
  df::ReviseStage(wd, std::nullopt);
  df::GenerateStage(wd, config, std::nullopt);
  return config;
}

bool Ordered(const df::Interval& i) { return i.low <= i.point && i.point <= i.high; }

// ---------------------------------------------------------------------------

void ParserGolden(Check& c) {
  TempDir tmp;
  const fs::path out = tmp / "parse";
  std::string err;
  c.Expect(RunCli(tmp, "parse data/fixtures/template_bot.json --out " + Quote(out), &err) == 0, "parse failed: " + err);
  const fs::path golden = df::testing::GoldenDir() / "parse";
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(golden)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), golden);
    c.Expect(fs::exists(out / rel) && df::ReadFile(out / rel) == df::ReadFile(entry.path()),
             rel.string() + " differs from golden");
    ++compared;
  }
  std::size_t produced = 0;
  for (const auto& entry : fs::directory_iterator(out / "maps")) produced += entry.is_regular_file();
  c.Expect(produced == 6, "expected 6 map files, got " + std::to_string(produced));

  const auto& def = df::testing::FixtureBot();
  c.Expect(def.intents.size() == 6, "fixture must define six intents");
  for (const auto& i : def.intents)
    c.Expect(i.training_utterances.size() == 150, i.name + " has " + std::to_string(i.training_utterances.size()) + " utterances");
  c.Note(std::to_string(compared) + " golden files byte-exact, 6 intents x 150 utterances");
}

void AggregationOracle(Check& c) {
  std::mt19937_64 rng(20260101);
  std::size_t compared = 0;
  for (int round = 0; round < 200; ++round) {
    auto [graph, success] = df::testing::MakeRandomGraph(rng, 8);
    for (const auto& v : graph.vertices()) {
      auto expected = df::testing::BruteForceAggregate(graph, v.name, success);
      bool reachable = false;
      for (const auto& s : success) reachable |= !df::testing::BruteForceSimplePaths(graph, v.name, s).empty();
      try {
        auto actual = df::AggregateMap(graph, v.name, success);
        std::map<std::string, std::set<std::string>> as_sets;
        for (const auto& [act, list] : actual.entries) as_sets[act].insert(list.begin(), list.end());
        c.Expect(reachable && as_sets == expected, "graph " + std::to_string(round) + " dialog " + v.name);
      } catch (const df::NoPathError&) {
        c.Expect(!reachable, "graph " + std::to_string(round) + " dialog " + v.name + " threw NoPathError");
      }
      ++compared;
    }
  }
  c.Note("200 graphs, " + std::to_string(compared) + " maps agree");
}

Json perfect_report;

void PerfectBot(Check& c) {
  TempDir tmp;
  df::Workdir wd(tmp / "w");
  auto config = PrepareGoals(wd, df::ReadJsonFile(df::testing::FixtureDir() / "clean_config.json"));
  c.Expect(config.parallelism == 8, "clean config must use parallelism 8");
  c.Expect(config.injection.ner_miss_probability.empty(), "clean config must not inject errors");
  const auto start = std::chrono::steady_clock::now();
  auto sim = df::SimulateStage(wd, config);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  perfect_report = df::RemediateStage(wd, config);
  c.Expect(sim.counts.episodes == 600, "episodes = " + std::to_string(sim.counts.episodes));
  c.Expect(sim.counts.completion_rate() == 1.0, "completion = " + Fixed(sim.counts.completion_rate(), 4));
  c.Expect(seconds < 60.0, "simulation took " + Fixed(seconds, 1) + " s");
  c.Note("600 episodes, completion " + Fixed(sim.counts.completion_rate(), 4) + ", simulate " + Fixed(seconds, 2) +
         " s");
}

void InjectionCalibration(Check& c) {
  TempDir tmp;
  df::Workdir wd(tmp / "w");
  auto config = PrepareGoals(wd, Json{{"goals", {{"source", "utterances"}}},
                                      {"simulation", {{"parallelism", 8}}},
                                      {"runtime", {{"injection", {{"ner_miss_probability", 0.3}}}}}});
  auto goals = df::ReadFile(wd.goals());
  std::istringstream lines(goals);
  std::string line, kept;
  for (int i = 0; i < 500 && std::getline(lines, line); ++i) kept += line + "\n";
  df::WriteFile(wd.goals(), kept);

  auto sim = df::SimulateStage(wd, config);
  auto report = df::RemediateStage(wd, config);
  const Json log = df::ReadJsonFile(wd.runtime_log());
  const double injections = static_cast<double>(log["injections"].size());
  double attempts = 0;
  for (const auto& [slot, n] : log["extraction_attempts"].items()) attempts += n.get<double>();
  const double rate = attempts > 0 ? injections / attempts : 0.0;
  // Wilson score interval at 95%.
  const double z = 1.959964;
  const double centre = (rate + z * z / (2 * attempts)) / (1 + z * z / attempts);
  const double half = z * std::sqrt(rate * (1 - rate) / attempts + z * z / (4 * attempts * attempts)) /
                      (1 + z * z / attempts);

  c.Expect(sim.counts.episodes == 500, "episodes = " + std::to_string(sim.counts.episodes));
  c.Expect(std::abs(rate - 0.3) <= 0.05, "observed miss rate " + Fixed(rate));
  c.Expect(centre - half <= 0.3 && 0.3 <= centre + half,
           "0.3 outside 95% CI [" + Fixed(centre - half) + ", " + Fixed(centre + half) + "]");
  const auto ner = report["summary"]["ner_errors"].get<std::size_t>();
  c.Expect(ner == log["injections"].size(),
           "ner_error " + std::to_string(ner) + " != injections " + std::to_string(log["injections"].size()));
  c.Note("miss rate " + Fixed(rate) + " over " + Fixed(attempts, 0) + " extractions, 95% CI [" +
         Fixed(centre - half) + ", " + Fixed(centre + half) + "], ner_error = injections = " + std::to_string(ner));
}

void RetrainTrend(Check& c) {
  TempDir tmp;
  df::Workdir wd(tmp / "w");
  const fs::path eval = df::testing::FixtureDir() / "eval_utterances.json";
  Json overrides = df::ReadJsonFile(df::testing::FixtureDir() / "retrain_config.json");
  overrides["retrain"]["eval_utterances"] = eval.string();
  auto config = PrepareGoals(wd, overrides);
  c.Expect(config.bootstrap_iterations == 10000, "bootstrap iterations " + std::to_string(config.bootstrap_iterations));
  df::SimulateStage(wd, config);
  auto result = df::RetrainStage(wd, config, eval);

  c.Expect(result.rows.size() == 6, "expected six intents");
  auto rows = result.rows;
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.baseline.f1.point, a.intent) < std::tie(b.baseline.f1.point, b.intent);
  });
  std::ostringstream table;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const double before = r.baseline.f1.point;
    const double after = r.retrained.f1.point;
    c.Expect(after >= before, r.intent + " F1 fell " + Fixed(before) + " -> " + Fixed(after));
    if (i < 2) c.Expect(after > before, r.intent + " (weak) F1 did not rise: " + Fixed(before));
    for (const auto* row : {&r.baseline, &r.retrained})
      for (const auto& iv : {row->precision, row->recall, row->f1})
        c.Expect(Ordered(iv), r.intent + " interval out of order");
    table << (i ? ", " : "") << r.intent << " " << Fixed(before) << "->" << Fixed(after);
  }
  c.Expect(Ordered(result.baseline_macro_f1) && Ordered(result.retrained_macro_f1), "macro F1 interval out of order");

  // All-correct sessions must collapse every interval to [1, 1].
  const auto one = [](const Json& i) {
    return i["point"] == 1.0 && i["ci_low"] == 1.0 && i["ci_high"] == 1.0;
  };
  c.Expect(!perfect_report.is_null() && one(perfect_report["summary"]["completion_rate"]) &&
               one(perfect_report["summary"]["macro_f1"]),
           "perfect run intervals are not [1,1]");
  if (!perfect_report.is_null())
    for (const auto& row : perfect_report["analytics"]["intent_scores"])
      c.Expect(one(row["f1"]) && one(row["precision"]) && one(row["recall"]), "perfect run row not [1,1]");
  c.Note(table.str() + "; " + std::to_string(result.failing_queries) + " failing queries added");
}

std::vector<std::vector<std::string>> Vertices(const df::PathQueryResult& r) {
  std::vector<std::vector<std::string>> out;
  for (const auto& p : r.paths) out.push_back(p.vertices);
  return out;
}

void ComparePaths(Check& c, const df::ConversationGraph& graph, const std::string& label, std::size_t& pairs) {
  for (const auto& s : graph.vertices())
    for (const auto& t : graph.vertices()) {
      auto actual = df::EnumeratePaths(graph, s.name, t.name, std::nullopt, 1000000);
      if (s.name == t.name) {
        c.Expect(Vertices(actual) == std::vector<std::vector<std::string>>{{s.name}},
                 label + " " + s.name + " -> itself is not [[" + s.name + "]]");
      } else {
        c.Expect(Vertices(actual) == df::testing::BruteForceSimplePaths(graph, s.name, t.name),
                 label + " " + s.name + " -> " + t.name);
      }
      c.Expect(!actual.truncated, label + " truncated");
      ++pairs;
    }
}

void PathOracle(Check& c) {
  std::size_t pairs = 0;
  ComparePaths(c, df::BuildGraph(df::testing::FixtureBot()), "template bot", pairs);
  ComparePaths(c, df::ConversationGraphFromJson(df::ReadJsonFile(df::testing::GoldenDir() / "parse" / "graph.json")),
               "golden graph", pairs);
  std::mt19937_64 rng(77);
  for (int round = 0; round < 100; ++round)
    ComparePaths(c, df::testing::MakeRandomGraph(rng, 8).graph, "random " + std::to_string(round), pairs);
  c.Note("2 fixture graphs + 100 random graphs, " + std::to_string(pairs) + " pairs agree, source=target gives [[s]]");
}

void Determinism(Check& c) {
  TempDir tmp;
  for (const char* run : {"a", "b"}) {
    const std::string out = " --out " + Quote(tmp / run);
    for (const std::string& step : {"parse data/fixtures/template_bot.json --config data/fixtures/retrain_config.json" +
                                        out,
                                    "revise" + out, "generate" + out, "simulate --parallelism 4" + out,
                                    "remediate" + out}) {
      std::string err;
      c.Expect(RunCli(tmp, step, &err) == 0, step + ": " + err);
    }
  }
  for (const char* file : {"goals.jsonl", "episodes.jsonl", "report.json"}) {
    const auto a = df::ReadFile(tmp / "a" / file);
    c.Expect(!a.empty() && a == df::ReadFile(tmp / "b" / file), std::string(file) + " differs between runs");
  }
  c.Note("goals.jsonl, episodes.jsonl, report.json byte-identical across two CLI runs");
}

void StageGating(Check& c) {
  TempDir tmp;
  const std::string out = " --out " + Quote(tmp / "w");
  std::string err;
  c.Expect(RunCli(tmp, "parse data/fixtures/template_bot.json" + out, &err) == 0, "parse: " + err);
  const int status = RunCli(tmp, "generate" + out, &err);
  const Json cli_error = Json::parse(err, nullptr, false);
  c.Expect(status == 3, "cli generate exit " + std::to_string(status));
  c.Expect(!cli_error.is_discarded() && cli_error["error"]["code"] == "UnrevisedMapError", "cli stderr: " + err);
  c.Expect(!fs::exists(tmp / "w" / "goals.jsonl"), "goals written despite gating");

  df::SessionStore store(tmp / "db.sqlite");
  df::ApiOptions options;
  options.data_dir = tmp.path();
  df::ApiService service(store, options);
  df::BackgroundServer server;
  service.Mount(server.server());
  httplib::Client client("127.0.0.1", server.Start("127.0.0.1", 0));
  auto created = client.Post("/api/sessions", Json{{"bot", df::ReadJsonFile(df::testing::FixtureBotPath())}}.dump(),
                             "application/json");
  c.Expect(created && created->status == 201, "session create failed");
  int api_status = 0;
  std::string api_code;
  if (created && created->status == 201) {
    const std::string id = Json::parse(created->body)["session_id"];
    auto res = client.Post(("/api/sessions/" + id + "/goals").c_str(), "{}", "application/json");
    api_status = res ? res->status : 0;
    if (res) api_code = Json::parse(res->body)["error"].value("code", "");
  }
  server.Stop();
  c.Expect(api_status == 409 || api_status == 422, "api goals status " + std::to_string(api_status));
  c.Expect(api_code == "UnrevisedMapError", "api error code " + api_code);
  c.Note("cli exit " + std::to_string(status) + " UnrevisedMapError, api " + std::to_string(api_status) + " " + api_code);
}

struct Criterion {
  const char* name;
  double budget_seconds;  // 0 means no runtime bound
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"parser-golden", 5, ParserGolden},
      {"aggregation-oracle", 30, AggregationOracle},
      {"perfect-bot-completion", 0, PerfectBot},
      {"injection-calibration", 0, InjectionCalibration},
      {"retraining-trend", 180, RetrainTrend},
      {"path-explorer-oracle", 0, PathOracle},
      {"determinism", 0, Determinism},
      {"stage-gating", 0, StageGating},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.Expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criterion.budget_seconds > 0)
      check.Expect(seconds < criterion.budget_seconds,
                   "runtime " + Fixed(seconds, 1) + " s over " + Fixed(criterion.budget_seconds, 0) + " s budget");
    failed += !check.ok();
    std::cout << (check.ok() ? "PASS" : "FAIL") << "  " << std::left << std::setw(24) << criterion.name << " "
              << std::right << std::setw(7) << Fixed(seconds, 2) << " s  " << check.Summary() << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
  return failed ? 1 : 0;
}
