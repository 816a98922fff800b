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

// Dialog path explorer.

#ifndef DIALOGFORGE_REMEDIATOR_PATHS_HPP
#define DIALOGFORGE_REMEDIATOR_PATHS_HPP

#include <string>
#include <vector>

#include "dialogforge/generator/graph.hpp"

namespace dialogforge {

inline constexpr std::size_t kDefaultMaxPaths = 1000;

struct DialogPath {
  std::vector<std::string> vertices;
  /// Number of edges.
  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }

  bool operator==(const DialogPath&) const = default;
};

struct PathQueryResult {
  std::vector<DialogPath> paths;
  /// More paths exist than were returned.
  bool truncated = false;
};

inline Json ToJson(const PathQueryResult& r) {
  Json paths = Json::array();
  for (const auto& p : r.paths) paths.push_back(Json{{"vertices", p.vertices}, {"length", p.length()}});
  return Json{{"paths", paths}, {"truncated", r.truncated}};
}

/// Simple paths from `source` to `target` with at most `max_length` edges,
/// in lexicographic order of their vertex sequences. source == target
/// yields the single path [source].
inline PathQueryResult EnumeratePaths(const ConversationGraph& graph, const std::string& source,
                                      const std::string& target, std::optional<std::size_t> max_length = std::nullopt,
                                      std::size_t max_paths = kDefaultMaxPaths) {
  for (const auto* v : {&source, &target})
    if (!graph.Contains(*v)) throw UnknownVertex("unknown dialog '" + *v + "'");
  PathQueryResult result;
  if (source == target) {
    result.paths.push_back({{source}});
    return result;
  }
  const std::size_t limit = max_length.value_or(graph.vertices().size());
  // A path ending at target is never a prefix of another, so depth-first
  // order over sorted successors is lexicographic order.
  WalkSimplePaths(graph, source, [&](const std::vector<std::string>& path) {
    if (result.truncated) return false;
    if (path.back() == target) {
      if (result.paths.size() == max_paths) {
        result.truncated = true;
        return false;
      }
      result.paths.push_back({path});
      return false;
    }
    return path.size() - 1 < limit;
  });
  return result;
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_REMEDIATOR_PATHS_HPP
