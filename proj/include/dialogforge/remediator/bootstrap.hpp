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

// Percentile bootstrap confidence intervals.

#ifndef DIALOGFORGE_REMEDIATOR_BOOTSTRAP_HPP
#define DIALOGFORGE_REMEDIATOR_BOOTSTRAP_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <thread>
#include <vector>

#include "dialogforge/common.hpp"

namespace dialogforge {

struct BootstrapConfig {
  std::size_t iterations = 10000;
  double level = 0.95;
  std::uint64_t seed = 0;
  std::size_t parallelism = 1;
};

struct Interval {
  double point = 0.0;
  double low = 0.0;
  double high = 0.0;

  bool operator==(const Interval&) const = default;
};

inline Json ToJson(const Interval& i) { return Json{{"point", i.point}, {"ci_low", i.low}, {"ci_high", i.high}}; }

/// Linear-interpolated quantile of sorted `values`, q in [0, 1].
inline double SortedQuantile(const std::vector<double>& values, double q) {
  if (values.empty()) return 0.0;
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

/// Bootstrap for a vector-valued statistic: every resample (same size as
/// `items`, drawn with replacement) is evaluated once and each component
/// gets its own percentile interval. Iteration i draws from a generator
/// seeded with (seed, i), so results do not depend on `parallelism`. The
/// interval is widened to contain the full-sample point estimate when the
/// percentile bounds miss it.
template <typename T, typename Statistic>
std::vector<Interval> BootstrapIntervals(std::span<const T> items, Statistic statistic, const BootstrapConfig& config) {
  const std::vector<double> point = statistic(items);
  const std::size_t k = point.size();
  std::vector<Interval> out(k);
  for (std::size_t c = 0; c < k; ++c) out[c] = {point[c], point[c], point[c]};
  if (items.empty() || config.iterations == 0) return out;

  std::vector<std::vector<double>> samples(k, std::vector<double>(config.iterations));
  auto run = [&](std::size_t begin, std::size_t end) {
    std::vector<T> resample(items.size());
    for (std::size_t it = begin; it < end; ++it) {
      Rng rng(DeriveSeed(config.seed, static_cast<std::uint64_t>(it)));
      for (auto& slot : resample) slot = items[rng.Uniform(items.size())];
      auto stats = statistic(std::span<const T>(resample));
      for (std::size_t c = 0; c < k; ++c) samples[c][it] = stats[c];
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(config.parallelism, config.iterations));
  if (threads == 1) {
    run(0, config.iterations);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (config.iterations + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(config.iterations, begin + chunk);
      if (begin < end) pool.emplace_back(run, begin, end);
    }
  }

  const double alpha = 1.0 - config.level;
  for (std::size_t c = 0; c < k; ++c) {
    auto& s = samples[c];
    std::sort(s.begin(), s.end());
    out[c].low = std::min(SortedQuantile(s, alpha / 2.0), point[c]);
    out[c].high = std::max(SortedQuantile(s, 1.0 - alpha / 2.0), point[c]);
  }
  return out;
}

/// Scalar form of BootstrapIntervals.
template <typename T, typename Statistic>
Interval BootstrapCi(std::span<const T> items, Statistic statistic, const BootstrapConfig& config) {
  auto wrapped = [&](std::span<const T> sample) { return std::vector<double>{statistic(sample)}; };
  return BootstrapIntervals<T>(items, wrapped, config).front();
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_REMEDIATOR_BOOTSTRAP_HPP
