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

// Distils a six-attribute natural-language profile from a listener's top
// shows and episodes: prompt rendering, generation with one re-ask, and
// parsing of the sectioned response.

#ifndef PODJUDGE_PROFILER_H_
#define PODJUDGE_PROFILER_H_

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "podjudge/corpus.h"
#include "podjudge/errors.h"
#include "podjudge/gateway.h"
#include "podjudge/prompts.h"
#include "podjudge/util.h"

namespace podjudge {

enum class ProfileSection {
  kTopicalEntityFocus,
  kCrossDomainCuriosity,
  kExplorationTendency,
  kListeningHabits,
  kEngagementDepth,
  kFormatPreferences,
};

inline constexpr std::size_t kProfileSectionCount = 6;

inline constexpr std::array<ProfileSection, kProfileSectionCount> kAllProfileSections = {
    ProfileSection::kTopicalEntityFocus, ProfileSection::kCrossDomainCuriosity,
    ProfileSection::kExplorationTendency, ProfileSection::kListeningHabits,
    ProfileSection::kEngagementDepth,    ProfileSection::kFormatPreferences,
};

// "TOPICAL_ENTITY_FOCUS", ...
std::string_view SectionHeader(ProfileSection section);
// "Topical and named-entity focus", ...
std::string_view SectionTitle(ProfileSection section);
// "topical_entity_focus", ... (JSON field names)
std::string_view SectionField(ProfileSection section);

using ProfileSections = std::array<std::string, kProfileSectionCount>;

struct UserProfile {
  std::string user_id;
  ProfileSections sections;  // indexed by ProfileSection
  int source_episode_count = 0;
  std::string generated_by;
  Instant generated_at;
  std::string template_version;

  const std::string& section(ProfileSection s) const {
    return sections[static_cast<std::size_t>(s)];
  }
  // Six sections in canonical order, "Title: text" per line.
  std::string ContextText() const;
  // Six section texts in canonical order joined by newlines.
  std::string PlainText() const;
};

void to_json(nlohmann::json& j, const UserProfile& p);
void from_json(const nlohmann::json& j, UserProfile& p);

struct ProfilePromptOptions {
  std::size_t description_budget = 500;   // code points per item
  std::size_t transcript_budget = 1000;   // code points per item
  std::size_t title_budget = 200;
  std::size_t prompt_char_cap = 24000;    // whole prompt, bytes
};

// Deterministic; the result never exceeds `prompt_char_cap` bytes. Episodes
// are dropped from the tail (with a note) when the cap would be exceeded.
std::string RenderProfilePrompt(const ProfileInput& input, const PromptTemplate& tmpl,
                                const ProfilePromptOptions& options = {});

// Scans lines for `SECTION_NAME:` headers (case-insensitive; spaces or
// hyphens may stand in for underscores; leading '#', '*', '-' and surrounding
// '*' are ignored). Text before the first header is ignored; a line reading
// END_OF_PROFILE ends the last section. Throws ProfileParseError if any
// section is missing, empty, or repeated.
ProfileSections ParseProfileResponse(std::string_view raw);

class ProfileParseError : public DataError {
 public:
  ProfileParseError(const std::string& what, std::vector<ProfileSection> missing)
      : DataError(what), missing_(std::move(missing)) {}
  const std::vector<ProfileSection>& missing() const { return missing_; }

 private:
  std::vector<ProfileSection> missing_;
};

struct ProfileGenerationOptions {
  std::string model_id = "gpt-4.1";
  double temperature = 0.0;
  int max_output_tokens = 1200;
  Instant generated_at{};
  ProfilePromptOptions prompt;
};

// Renders, generates, parses. On a parse failure re-asks once with a format
// reminder, then throws UnparseableResponseError holding the raw text.
UserProfile GenerateProfile(const ProfileInput& input, Gateway& gateway,
                            const PromptTemplate& tmpl,
                            const ProfileGenerationOptions& options = {});

// The exact reminder appended to the prompt on re-ask.
std::string ProfileReaskSuffix(const ProfileParseError& error);

// Renders a canonical response for `sections` (headers in canonical order,
// END_OF_PROFILE terminator).
std::string FormatProfileResponse(const ProfileSections& sections);

}  // namespace podjudge

#endif  // PODJUDGE_PROFILER_H_
