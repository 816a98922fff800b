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

// Intent-overlap detection by greedy agglomerative merging on symmetric
// confusion mass.

#ifndef DIALOGFORGE_REMEDIATOR_CLUSTERING_HPP
#define DIALOGFORGE_REMEDIATOR_CLUSTERING_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "dialogforge/remediator/metrics.hpp"

namespace dialogforge {

inline constexpr double kDefaultMergeThreshold = 0.1;

struct IntentCluster {
  /// Sorted member intents, at least two.
  std::vector<std::string> intents;
  /// Mass of the last merge that formed the cluster.
  double mass = 0.0;
};

inline Json ToJson(const IntentCluster& c) { return Json{{"intents", c.intents}, {"mass", c.mass}}; }

/// Mutual confusion between two groups of rows: the counts exchanged
/// between them divided by their combined support.
inline double ConfusionMass(const ConfusionMatrix& c, const std::vector<std::size_t>& x,
                            const std::vector<std::size_t>& y) {
  std::size_t exchanged = 0;
  std::size_t support = 0;
  for (auto i : x) {
    support += c.RowSum(i);
    for (auto j : y) exchanged += c.at(i, j) + c.at(j, i);
  }
  for (auto j : y) support += c.RowSum(j);
  return support ? static_cast<double>(exchanged) / static_cast<double>(support) : 0.0;
}

/// Repeatedly merges the pair of clusters with the highest mass while it
/// is at least `merge_threshold`; ties go to the lexicographically first
/// pair. Masses never exceed 1, so a threshold of 1 or more disables
/// merging. Singletons are dropped; clusters are ordered by size, then
/// name.
inline std::vector<IntentCluster> ClusterConfusion(const ConfusionMatrix& confusion,
                                                   double merge_threshold = kDefaultMergeThreshold) {
  struct Working {
    std::vector<std::size_t> rows;
    std::vector<std::string> names;
    double mass = 0.0;
  };
  std::vector<Working> clusters;
  for (std::size_t i = 0; i < confusion.size(); ++i) clusters.push_back({{i}, {confusion.labels()[i]}, 0.0});
  if (merge_threshold < 1.0) {
    while (clusters.size() > 1) {
      double best = -1.0;
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = 0; i < clusters.size(); ++i)
        for (std::size_t j = i + 1; j < clusters.size(); ++j) {
          double m = ConfusionMass(confusion, clusters[i].rows, clusters[j].rows);
          if (m > best) {
            best = m;
            bi = i;
            bj = j;
          }
        }
      if (best < merge_threshold || best <= 0.0) break;
      auto& a = clusters[bi];
      auto& b = clusters[bj];
      a.rows.insert(a.rows.end(), b.rows.begin(), b.rows.end());
      a.names.insert(a.names.end(), b.names.begin(), b.names.end());
      std::sort(a.rows.begin(), a.rows.end());
      std::sort(a.names.begin(), a.names.end());
      a.mass = best;
      clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    }
  }
  std::vector<IntentCluster> out;
  for (auto& c : clusters)
    if (c.names.size() > 1) out.push_back({std::move(c.names), c.mass});
  std::sort(out.begin(), out.end(), [](const IntentCluster& a, const IntentCluster& b) {
    if (a.intents.size() != b.intents.size()) return a.intents.size() > b.intents.size();
    return a.intents < b.intents;
  });
  return out;
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_REMEDIATOR_CLUSTERING_HPP
