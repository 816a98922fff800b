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

// Conversation graph over dialogs and the graph-based aggregation of local
// dialog-act maps into per-dialog maps.

#ifndef DIALOGFORGE_GENERATOR_GRAPH_HPP
#define DIALOGFORGE_GENERATOR_GRAPH_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dialogforge/generator/act_map.hpp"

namespace dialogforge {

DIALOGFORGE_DEFINE_ERROR(NoPathError);
DIALOGFORGE_DEFINE_ERROR(HeuristicUnavailable);
DIALOGFORGE_DEFINE_ERROR(UnknownVertex);

inline constexpr std::size_t kMaxPathsPerTarget = 10000;

struct GraphVertex {
  std::string name;
  bool is_sub_dialog = false;
  /// Step texts in authoring order, placeholders stripped.
  std::vector<std::string> messages;
  DialogActMap local_map;

  bool operator==(const GraphVertex&) const = default;
};

struct GraphEdge {
  std::string source;
  std::string target;
  TransitionCondition condition = TransitionCondition::kAlways;

  bool operator==(const GraphEdge&) const = default;
};

class ConversationGraph {
 public:
  ConversationGraph() = default;
  ConversationGraph(std::vector<GraphVertex> vertices, std::vector<GraphEdge> edges,
                    std::vector<std::string> success_dialogs)
      : vertices_(std::move(vertices)), edges_(std::move(edges)),
        success_dialogs_(std::move(success_dialogs)) {
    for (std::size_t i = 0; i < vertices_.size(); ++i) index_[vertices_[i].name] = i;
    successors_.resize(vertices_.size());
    for (const auto& e : edges_) {
      auto s = index_.find(e.source);
      auto t = index_.find(e.target);
      if (s == index_.end()) throw UnknownVertex("edge source '" + e.source + "' is not a vertex");
      if (t == index_.end()) throw UnknownVertex("edge target '" + e.target + "' is not a vertex");
      successors_[s->second].insert(e.target);
    }
    for (const auto& s : success_dialogs_)
      if (!index_.contains(s)) throw UnknownVertex("success dialog '" + s + "' is not a vertex");
  }

  const std::vector<GraphVertex>& vertices() const noexcept { return vertices_; }
  const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
  const std::vector<std::string>& success_dialogs() const noexcept { return success_dialogs_; }

  bool Contains(std::string_view name) const { return index_.contains(std::string(name)); }

  const GraphVertex& Vertex(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw UnknownVertex("unknown dialog '" + std::string(name) + "'");
    return vertices_[it->second];
  }

  /// Distinct successors in lexicographic order.
  const std::set<std::string>& Successors(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw UnknownVertex("unknown dialog '" + std::string(name) + "'");
    return successors_[it->second];
  }

  std::size_t IndexOf(std::string_view name) const { return index_.at(std::string(name)); }

  bool operator==(const ConversationGraph& other) const {
    return vertices_ == other.vertices_ && edges_ == other.edges_ &&
           success_dialogs_ == other.success_dialogs_;
  }

 private:
  std::vector<GraphVertex> vertices_;
  std::vector<GraphEdge> edges_;
  std::vector<std::string> success_dialogs_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::set<std::string>> successors_;
};

inline ConversationGraph BuildGraph(const BotDefinition& def) {
  auto local = ParseLocalMaps(def);
  std::vector<GraphVertex> vertices;
  std::vector<GraphEdge> edges;
  for (const auto& d : def.dialogs) {
    GraphVertex v{d.name, d.is_sub_dialog, {}, local.at(d.name)};
    for (const auto& s : d.steps) v.messages.push_back(StripPlaceholders(s.text));
    vertices.push_back(std::move(v));
    for (const auto& t : d.transitions) edges.push_back({d.name, t.target, t.condition});
  }
  return ConversationGraph(std::move(vertices), std::move(edges), def.success_dialogs);
}

inline Json ToJson(const ConversationGraph& graph) {
  Json vertices = Json::array();
  for (const auto& v : graph.vertices())
    vertices.push_back({{"name", v.name},
                        {"is_sub_dialog", v.is_sub_dialog},
                        {"messages", v.messages},
                        {"local_map", ToJson(v.local_map)}});
  Json edges = Json::array();
  for (const auto& e : graph.edges())
    edges.push_back({{"source", e.source}, {"target", e.target}, {"condition", ToString(e.condition)}});
  return Json{{"schema_version", kSchemaVersion},
              {"vertices", vertices},
              {"edges", edges},
              {"success_dialogs", graph.success_dialogs()}};
}

inline ConversationGraph ConversationGraphFromJson(const Json& doc) {
  detail::SchemaReader r(doc);
  r.ExpectObject(doc, "", {"schema_version", "vertices", "edges", "success_dialogs"}, {});
  std::vector<GraphVertex> vertices;
  for (const auto& v : r.Array(doc["vertices"], "/vertices")) {
    r.ExpectObject(v, "/vertices", {"name", "is_sub_dialog", "messages", "local_map"}, {});
    vertices.push_back({r.String(v["name"], "/vertices/name"), v["is_sub_dialog"].get<bool>(),
                        r.StringList(v["messages"], "/vertices/messages"),
                        DialogActMapFromJson(v["local_map"])});
  }
  std::vector<GraphEdge> edges;
  for (const auto& e : r.Array(doc["edges"], "/edges")) {
    r.ExpectObject(e, "/edges", {"source", "target", "condition"}, {});
    auto cond = detail::ParseEnum<TransitionCondition, 3>(
        r.String(e["condition"], "/edges/condition"), "/edges/condition",
        {{{"always", TransitionCondition::kAlways},
          {"on_success", TransitionCondition::kOnSuccess},
          {"on_failure", TransitionCondition::kOnFailure}}});
    edges.push_back({r.String(e["source"], "/edges/source"), r.String(e["target"], "/edges/target"), cond});
  }
  return ConversationGraph(std::move(vertices), std::move(edges),
                           r.StringList(doc["success_dialogs"], "/success_dialogs"));
}

/// Depth-first walk over simple paths starting at `source`, successors in
/// lexicographic order. `visit` sees the current path (source first) and
/// returns false to stop extending it. Returns false if the walk was cut
/// short by `max_steps`.
inline bool WalkSimplePaths(const ConversationGraph& graph, const std::string& source,
                            const std::function<bool(const std::vector<std::string>&)>& visit,
                            std::size_t max_steps = 50'000'000) {
  std::vector<std::string> path{source};
  std::set<std::string> on_path{source};
  std::size_t steps = 0;
  bool complete = true;
  std::function<void()> dfs = [&]() {
    if (!complete) return;
    if (++steps > max_steps) {
      complete = false;
      return;
    }
    if (!visit(path)) return;
    for (const auto& next : graph.Successors(path.back())) {
      if (on_path.contains(next)) continue;
      path.push_back(next);
      on_path.insert(next);
      dfs();
      on_path.erase(next);
      path.pop_back();
      if (!complete) return;
    }
  };
  dfs();
  return complete;
}

struct SuccessPathSummary {
  /// Vertices lying on at least one simple path to a success dialog.
  std::set<std::string> on_path;
  /// Success paths in depth-first (lexicographic) order, up to the cap.
  std::vector<std::vector<std::string>> paths;
  bool truncated = false;
};

inline SuccessPathSummary SummarizeSuccessPaths(const ConversationGraph& graph, const std::string& source,
                                                const std::set<std::string>& success,
                                                std::size_t cap = kMaxPathsPerTarget) {
  SuccessPathSummary summary;
  std::map<std::string, std::size_t> per_target;
  bool complete = WalkSimplePaths(graph, source, [&](const std::vector<std::string>& path) {
    const auto& last = path.back();
    if (success.contains(last)) {
      auto& count = per_target[last];
      if (count >= cap) {
        summary.truncated = true;
      } else {
        ++count;
        summary.on_path.insert(path.begin(), path.end());
        if (summary.paths.size() < cap) summary.paths.push_back(path);
      }
    }
    return true;
  });
  if (!complete) summary.truncated = true;
  return summary;
}

/// Union of the local maps of every vertex on a simple path from `dialog`
/// to any success dialog. Candidate order: `dialog` first, then the other
/// contributing vertices in graph order.
inline DialogActMap AggregateMap(const ConversationGraph& graph, const std::string& dialog,
                                 const std::set<std::string>& success_dialogs,
                                 std::vector<std::string>* diagnostics = nullptr) {
  graph.Vertex(dialog);
  auto summary = SummarizeSuccessPaths(graph, dialog, success_dialogs);
  if (summary.on_path.empty())
    throw NoPathError("no success dialog is reachable from '" + dialog + "'");
  if (summary.truncated && diagnostics)
    diagnostics->push_back("path enumeration from '" + dialog + "' hit the cap of " +
                           std::to_string(kMaxPathsPerTarget) + " paths per target");

  DialogActMap out;
  out.dialog = dialog;
  auto merge = [&](const GraphVertex& v) {
    for (const auto& [act, candidates] : v.local_map.entries)
      for (const auto& c : candidates) AppendUnique(out.entries[act], c);
  };
  merge(graph.Vertex(dialog));
  for (const auto& v : graph.vertices())
    if (v.name != dialog && summary.on_path.contains(v.name)) merge(v);
  return out;
}

struct SuccessActs {
  std::vector<std::string> intent_success;
  std::vector<std::string> dialog_success;
};

/// First message of the entry dialog and last message of the reachable
/// success dialogs. A stepless entry dialog falls back to the first
/// stepful dialog on a success path.
inline SuccessActs InferSuccessActs(const ConversationGraph& graph, const std::string& dialog,
                                    const std::set<std::string>& success_dialogs) {
  auto summary = SummarizeSuccessPaths(graph, dialog, success_dialogs);
  SuccessActs acts;

  const auto& entry = graph.Vertex(dialog);
  if (!entry.messages.empty()) {
    acts.intent_success.push_back(entry.messages.front());
  } else {
    for (const auto& path : summary.paths) {
      for (const auto& name : path) {
        const auto& v = graph.Vertex(name);
        if (!v.messages.empty()) {
          acts.intent_success.push_back(v.messages.front());
          break;
        }
      }
      if (!acts.intent_success.empty()) break;
    }
  }

  for (const auto& v : graph.vertices())
    if (success_dialogs.contains(v.name) && summary.on_path.contains(v.name) && !v.messages.empty())
      AppendUnique(acts.dialog_success, v.messages.back());
  if (acts.dialog_success.empty()) {
    for (const auto& path : summary.paths) {
      for (auto it = path.rbegin(); it != path.rend(); ++it) {
        const auto& v = graph.Vertex(*it);
        if (!v.messages.empty()) {
          acts.dialog_success.push_back(v.messages.back());
          break;
        }
      }
      if (!acts.dialog_success.empty()) break;
    }
  }

  if (acts.intent_success.empty() || acts.dialog_success.empty())
    throw HeuristicUnavailable("dialog '" + dialog + "' and its reachable success dialogs have no messages");
  return acts;
}

struct ParsedBot {
  ConversationGraph graph;
  /// One aggregated map per intent entry dialog, in intent order.
  std::vector<DialogActMap> maps;
  std::vector<std::string> diagnostics;
};

/// Local parsing, graph construction, aggregation and success-act inference
/// for every dialog that is the entry point of an intent.
inline ParsedBot ParseBot(const BotDefinition& def) {
  ParsedBot parsed;
  parsed.graph = BuildGraph(def);
  std::set<std::string> success(def.success_dialogs.begin(), def.success_dialogs.end());
  std::set<std::string> seen;
  for (const auto& intent : def.intents) {
    if (!seen.insert(intent.entry_dialog).second) continue;
    auto map = AggregateMap(parsed.graph, intent.entry_dialog, success, &parsed.diagnostics);
    auto acts = InferSuccessActs(parsed.graph, intent.entry_dialog, success);
    map.intent_success_message = std::move(acts.intent_success);
    map.dialog_success_message = std::move(acts.dialog_success);
    parsed.maps.push_back(std::move(map));
  }
  return parsed;
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_GENERATOR_GRAPH_HPP
