// Copyright 2026 The Podjudge Authors.
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

#ifndef PODJUDGE_UTIL_H_
#define PODJUDGE_UTIL_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace podjudge {

// UTC instant with millisecond resolution.
using Instant = std::chrono::sys_time<std::chrono::milliseconds>;

// Parses RFC 3339 ("2024-05-01T12:30:00Z", "2024-05-01T14:30:00.250+02:00")
// and normalizes to UTC. Throws DataError on malformed input.
Instant ParseRfc3339(std::string_view text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ", adding ".mmm" only when the
// millisecond part is non-zero.
std::string FormatRfc3339(Instant t);

std::string_view Trim(std::string_view s);
std::string ToLower(std::string_view s);
std::string ToUpper(std::string_view s);
bool StartsWithIgnoreCase(std::string_view s, std::string_view prefix);
bool ContainsIgnoreCase(std::string_view haystack, std::string_view needle);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);

// Number of UTF-8 code points in `s`.
std::size_t Utf8Length(std::string_view s);

// Returns `s` unchanged if it has at most `max_chars` code points, otherwise
// the longest prefix that fits together with the "..." marker.
std::string TruncateWithEllipsis(std::string_view s, std::size_t max_chars);

inline constexpr std::string_view kEllipsis = "...";

// 64-bit FNV-1a. Stable across platforms; used for seed derivation and the
// token-hash embedder.
std::uint64_t Fnv1a64(std::string_view s, std::uint64_t basis = 0xcbf29ce484222325ULL);

// SplitMix64 finalizer.
std::uint64_t SplitMix64(std::uint64_t x);

// Lower-case hex SHA-256 of `data`.
std::string Sha256Hex(std::string_view data);

// Whole-file helpers. ReadFile throws DataError when the file cannot be read.
std::string ReadFile(const std::filesystem::path& path);

// Writes via a temporary sibling and rename, so readers never observe a
// partially written file.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view data);

}  // namespace podjudge

#endif  // PODJUDGE_UTIL_H_
