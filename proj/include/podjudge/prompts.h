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

// Versioned prompt templates with `{{placeholder}}` substitution, and the
// structural markers every template carries. The markers delimit the blocks
// the offline mock providers read back out of a prompt.

#ifndef PODJUDGE_PROMPTS_H_
#define PODJUDGE_PROMPTS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace podjudge {

namespace markers {
inline constexpr std::string_view kTaskProfile = "TASK: USER_PROFILE";
inline constexpr std::string_view kTaskPointwise = "TASK: POINTWISE_JUDGMENT";
inline constexpr std::string_view kTaskPairwise = "TASK: PAIRWISE_JUDGMENT";
inline constexpr std::string_view kTopShows = "### TOP SHOWS";
inline constexpr std::string_view kTopEpisodes = "### TOP EPISODES";
inline constexpr std::string_view kSummaryEnd = "### END LISTENING SUMMARY";
inline constexpr std::string_view kContextBegin = "### USER CONTEXT";
inline constexpr std::string_view kContextEnd = "### END USER CONTEXT";
inline constexpr std::string_view kCandidateBegin = "### CANDIDATE EPISODE";
inline constexpr std::string_view kCandidateEnd = "### END CANDIDATE EPISODE";
inline constexpr std::string_view kListABegin = "### LIST A";
inline constexpr std::string_view kListAEnd = "### END LIST A";
inline constexpr std::string_view kListBBegin = "### LIST B";
inline constexpr std::string_view kListBEnd = "### END LIST B";
// Per-item tag line inside episode blocks: "Tags: a, b, c".
inline constexpr std::string_view kTagsPrefix = "Tags:";
}  // namespace markers

class PromptTemplate {
 public:
  PromptTemplate(std::string version, std::string text);

  // e.g. "pointwise.v1"; recorded on every artifact produced with it.
  const std::string& version() const { return version_; }
  const std::string& text() const { return text_; }

  // Placeholder names in order of first appearance.
  std::vector<std::string> Placeholders() const;

  // Single-pass substitution; substituted values are never re-expanded.
  // ConfigError when a placeholder has no value.
  std::string Render(const std::map<std::string, std::string>& values) const;

 private:
  std::string version_;
  std::string text_;
};

// Loads `<dir>/<version>.txt` when `dir` is given, otherwise the copy
// compiled into the binary from prompts/. ConfigError for unknown versions.
PromptTemplate LoadTemplate(std::string_view version,
                            const std::optional<std::filesystem::path>& dir = std::nullopt);

// Versions compiled into the binary.
std::vector<std::string> BuiltinTemplateVersions();

// Text between the first line equal to `begin` and the next line equal to
// `end` (both trimmed), excluding the marker lines. nullopt if absent.
std::optional<std::string> ExtractBlock(std::string_view text, std::string_view begin,
                                        std::string_view end);

}  // namespace podjudge

#endif  // PODJUDGE_PROMPTS_H_
