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

// Helpers shared by the test binaries: scratch directories, fixture paths
// and pinned-output comparison.

#ifndef DIALOGFORGE_TESTS_SUPPORT_HPP
#define DIALOGFORGE_TESTS_SUPPORT_HPP

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "dialogforge/bot_schema.hpp"
#include "dialogforge/common.hpp"
#include "dialogforge/generator.hpp"

namespace dialogforge::testing {

inline std::filesystem::path SourceDir() { return DIALOGFORGE_SOURCE_DIR; }
inline std::filesystem::path FixtureDir() { return SourceDir() / "data" / "fixtures"; }
inline std::filesystem::path GoldenDir() { return FixtureDir() / "golden"; }
inline std::filesystem::path FixtureBotPath() { return FixtureDir() / "template_bot.json"; }

inline const BotDefinition& FixtureBot() {
  static const BotDefinition kBot = LoadBotDefinition(FixtureBotPath());
  return kBot;
}

/// The fixture after parsing, with every map accepted as revised.
struct RevisedFixture {
  std::vector<DialogActMap> maps;
  Ontology ontology;
  std::vector<GoalIntent> intents;

  std::vector<SimulationGoal> Goals(const QueryPool& pool, std::size_t cap, std::uint64_t seed = 5) const {
    return GenerateGoals(maps, ontology, intents, pool, cap, seed);
  }
  std::vector<SimulationGoal> UtteranceGoals(std::size_t cap, std::uint64_t seed = 5) const {
    return Goals(QueriesFromUtterances(FixtureBot().intents), cap, seed);
  }
  std::map<std::string, std::string> DialogIntents() const {
    std::map<std::string, std::string> out;
    for (const auto& i : intents) out.emplace(i.dialog, i.intent);
    return out;
  }
};

inline RevisedFixture Revised(std::uint64_t ontology_seed = 1) {
  auto parsed = ParseBot(FixtureBot());
  RevisedFixture out{parsed.maps, ExtractOntology(FixtureBot(), parsed.maps, ontology_seed), {}};
  for (auto& m : out.maps) m.revised = true;
  for (const auto& i : FixtureBot().intents) out.intents.push_back({i.name, i.entry_dialog});
  return out;
}

/// A fresh directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("dialogforge-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Compares `actual` with the pinned file data/fixtures/golden/<name>.
/// With DIALOGFORGE_UPDATE_GOLDENS=1 the file is rewritten instead.
inline void ExpectGolden(const std::string& name, const std::string& actual) {
  const auto path = GoldenDir() / name;
  if (const char* update = std::getenv("DIALOGFORGE_UPDATE_GOLDENS"); update && std::string(update) == "1") {
    std::filesystem::create_directories(path.parent_path());
    WriteFile(path, actual);
    return;
  }
  ASSERT_TRUE(std::filesystem::exists(path)) << "missing golden " << path;
  EXPECT_EQ(ReadFile(path), actual) << "golden mismatch: " << name;
}

/// Runs a shell command, returning its exit status; stdout and stderr are
/// captured into the given files.
inline int RunCommand(const std::string& command, const std::filesystem::path& out,
                      const std::filesystem::path& err) {
  const std::string full = command + " > '" + out.string() + "' 2> '" + err.string() + "'";
  int status = std::system(full.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

}  // namespace dialogforge::testing

#endif  // DIALOGFORGE_TESTS_SUPPORT_HPP
