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

// Shared plumbing: error types, seeded RNG, hashing, text normalization and
// JSON file helpers.

#ifndef DIALOGFORGE_COMMON_HPP
#define DIALOGFORGE_COMMON_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace dialogforge {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Base of every error thrown by the library. `code()` is a stable,
/// machine-readable identifier (e.g. "ValidationError").
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define DIALOGFORGE_DEFINE_ERROR(Name)                              \
  class Name : public ::dialogforge::Error {                        \
   public:                                                          \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

DIALOGFORGE_DEFINE_ERROR(IoError);
DIALOGFORGE_DEFINE_ERROR(SyntaxError);
DIALOGFORGE_DEFINE_ERROR(SchemaError);

// ---------------------------------------------------------------------------
// Hashing and RNG

/// 64-bit FNV-1a. Stable across platforms; used to split seeds per intent,
/// per goal and per session.
constexpr std::uint64_t StableHash(std::string_view text) noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

constexpr std::uint64_t SplitMix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t salt) noexcept {
  return SplitMix64(seed ^ SplitMix64(salt));
}

inline std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view salt) noexcept {
  return DeriveSeed(seed, StableHash(salt));
}

/// Deterministic generator with platform-independent distributions. The
/// standard distributions are implementation-defined, which would break
/// byte-exact golden files across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t Uniform(std::uint64_t n) noexcept {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = Next();
    while (v >= limit) v = Next();
    return v % n;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi) noexcept {
    return lo + static_cast<std::int64_t>(
                    Uniform(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform real in [0, 1).
  double Uniform01() noexcept {
    return static_cast<double>(Next() >> 11) * (1.0 / 9007199254740992.0);
  }

  template <typename T>
  void Shuffle(std::vector<T>& items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[Uniform(i)]);
    }
  }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Text

inline std::string ToLower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

inline std::string Join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

/// Lowercase and collapse whitespace runs; the equality notion for
/// utterance deduplication.
inline std::string NormalizeUtterance(std::string_view text) {
  return Join(SplitWhitespace(ToLower(text)), " ");
}

inline std::string Trim(std::string_view text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(begin, end - begin + 1));
}

// ---------------------------------------------------------------------------
// Files

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void WriteFile(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

inline Json ParseJson(std::string_view text, std::string_view what = "document") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SyntaxError(std::string(what) + ": " + e.what());
  }
}

inline Json ReadJsonFile(const std::filesystem::path& path) {
  return ParseJson(ReadFile(path), path.string());
}

/// Canonical on-disk JSON: sorted keys, two-space indent, trailing newline.
inline std::string DumpJson(const Json& doc) { return doc.dump(2) + "\n"; }

inline void WriteJsonFile(const std::filesystem::path& path, const Json& doc) {
  WriteFile(path, DumpJson(doc));
}

inline std::vector<Json> ReadJsonLines(const std::filesystem::path& path) {
  std::vector<Json> out;
  std::istringstream in(ReadFile(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    out.push_back(ParseJson(line, path.string() + ":" + std::to_string(lineno)));
  }
  return out;
}

inline std::string DumpJsonLines(const std::vector<Json>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump();
    out += '\n';
  }
  return out;
}

}  // namespace dialogforge

#endif  // DIALOGFORGE_COMMON_HPP
