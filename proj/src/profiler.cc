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

#include "podjudge/profiler.h"

#include <algorithm>

#include <fmt/format.h>

#include "podjudge/errors.h"

namespace podjudge {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, kProfileSectionCount> kHeaders = {
    "TOPICAL_ENTITY_FOCUS", "CROSS_DOMAIN_CURIOSITY", "EXPLORATION_TENDENCY",
    "LISTENING_HABITS",     "ENGAGEMENT_DEPTH",       "FORMAT_PREFERENCES",
};

constexpr std::array<std::string_view, kProfileSectionCount> kTitles = {
    "Topical and named-entity focus", "Cross-domain curiosity",
    "Exploration or specialization",  "Listening habits",
    "Engagement depth",               "Format preferences",
};

constexpr std::array<std::string_view, kProfileSectionCount> kFields = {
    "topical_entity_focus", "cross_domain_curiosity", "exploration_tendency",
    "listening_habits",     "engagement_depth",       "format_preferences",
};

constexpr std::string_view kEndOfProfile = "END_OF_PROFILE";

std::size_t Index(ProfileSection s) { return static_cast<std::size_t>(s); }

std::string Tags(const std::vector<std::string>& tags) {
  return tags.empty() ? "(none)" : Join(tags, ", ");
}

std::string NormalizeHeader(std::string_view s) {
  while (!s.empty() && (s.back() == '*' || s.back() == '_' || s.back() == ' ')) {
    s.remove_suffix(1);
  }
  std::string out = ToUpper(Trim(s));
  std::replace(out.begin(), out.end(), ' ', '_');
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

std::string_view StripDecoration(std::string_view line) {
  line = Trim(line);
  while (!line.empty() && (line.front() == '#' || line.front() == '*' ||
                           line.front() == '-' || line.front() == ' ')) {
    line.remove_prefix(1);
  }
  return line;
}

std::string RenderShows(const ProfileInput& input, const ProfilePromptOptions& options) {
  if (input.top_shows.empty()) return "(none)";
  std::string out;
  int rank = 0;
  for (const auto& [show, seconds] : input.top_shows) {
    out += fmt::format("{}. {}", ++rank, TruncateWithEllipsis(show.title, options.title_budget));
    if (!show.publisher.empty()) {
      out += fmt::format(" (publisher: {})",
                         TruncateWithEllipsis(show.publisher, options.title_budget));
    }
    out += fmt::format(" | listened {} s\n", seconds);
    out += fmt::format("   {} {}\n", markers::kTagsPrefix, Tags(show.topic_tags));
    if (!show.description.empty()) {
      out += fmt::format("   Description: {}\n",
                         TruncateWithEllipsis(show.description, options.description_budget));
    }
  }
  out.pop_back();
  return out;
}

std::string RenderEpisodes(const ProfileInput& input, std::size_t count,
                           const ProfilePromptOptions& options,
                           const std::vector<std::string>& show_titles) {
  if (input.top_episodes.empty()) return "(none)";
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& episode = input.top_episodes[i].episode;
    const auto seconds = input.top_episodes[i].total_listened_seconds;
    out += fmt::format("{}. {} | show: {} | listened {} s of {} s\n", i + 1,
                       TruncateWithEllipsis(episode.title, options.title_budget),
                       TruncateWithEllipsis(show_titles[i], options.title_budget), seconds,
                       episode.duration_seconds);
    out += fmt::format("   {} {}\n", markers::kTagsPrefix, Tags(episode.topic_tags));
    if (!episode.description.empty()) {
      out += fmt::format("   Description: {}\n",
                         TruncateWithEllipsis(episode.description, options.description_budget));
    }
    if (episode.transcript_snippet && !episode.transcript_snippet->empty()) {
      out += fmt::format("   Transcript: {}\n",
                         TruncateWithEllipsis(*episode.transcript_snippet,
                                              options.transcript_budget));
    }
  }
  if (count < input.top_episodes.size()) {
    out += fmt::format("({} lower-ranked episodes omitted to fit the prompt budget)\n",
                       input.top_episodes.size() - count);
  }
  if (!out.empty()) out.pop_back();
  return out;
}

}  // namespace

std::string_view SectionHeader(ProfileSection section) { return kHeaders[Index(section)]; }
std::string_view SectionTitle(ProfileSection section) { return kTitles[Index(section)]; }
std::string_view SectionField(ProfileSection section) { return kFields[Index(section)]; }

std::string UserProfile::ContextText() const {
  std::string out;
  for (auto s : kAllProfileSections) {
    out += fmt::format("{}: {}\n", SectionTitle(s), section(s));
  }
  out.pop_back();
  return out;
}

std::string UserProfile::PlainText() const {
  return Join(std::vector<std::string>(sections.begin(), sections.end()), "\n");
}

void to_json(json& j, const UserProfile& p) {
  j = json::object();
  j["user_id"] = p.user_id;
  for (auto s : kAllProfileSections) j[std::string(SectionField(s))] = p.section(s);
  j["source_episode_count"] = p.source_episode_count;
  j["generated_by"] = p.generated_by;
  j["generated_at"] = FormatRfc3339(p.generated_at);
  j["template_version"] = p.template_version;
}

void from_json(const json& j, UserProfile& p) {
  p.user_id = j.at("user_id").get<std::string>();
  for (auto s : kAllProfileSections) {
    p.sections[Index(s)] = j.at(std::string(SectionField(s))).get<std::string>();
    if (Trim(p.sections[Index(s)]).empty()) {
      throw DataError(fmt::format("profile '{}' has an empty {}", p.user_id, SectionField(s)));
    }
  }
  p.source_episode_count = j.at("source_episode_count").get<int>();
  if (p.source_episode_count < 1) {
    throw DataError(fmt::format("profile '{}' has source_episode_count < 1", p.user_id));
  }
  p.generated_by = j.value("generated_by", "");
  p.generated_at = ParseRfc3339(j.at("generated_at").get<std::string>());
  p.template_version = j.value("template_version", "");
}

std::string RenderProfilePrompt(const ProfileInput& input, const PromptTemplate& tmpl,
                                const ProfilePromptOptions& options) {
  std::vector<std::string> show_titles;
  show_titles.reserve(input.top_episodes.size());
  for (const auto& ranked : input.top_episodes) {
    show_titles.push_back(ranked.show_title.empty() ? ranked.episode.show_id
                                                    : ranked.show_title);
  }

  const std::string shows = RenderShows(input, options);
  std::size_t count = input.top_episodes.size();
  while (true) {
    std::string prompt = tmpl.Render({
        {"user_id", input.user_id},
        {"show_count", std::to_string(input.top_shows.size())},
        {"episode_count", std::to_string(count)},
        {"top_shows", shows},
        {"top_episodes", RenderEpisodes(input, count, options, show_titles)},
    });
    if (prompt.size() <= options.prompt_char_cap) return prompt;
    if (count == 0) {
      throw ArgumentError(fmt::format("profile prompt for '{}' exceeds {} characters",
                                      input.user_id, options.prompt_char_cap));
    }
    --count;
  }
}

ProfileSections ParseProfileResponse(std::string_view raw) {
  ProfileSections sections;
  std::array<bool, kProfileSectionCount> seen{};
  int current = -1;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    auto nl = raw.find('\n', pos);
    if (nl == std::string_view::npos) nl = raw.size();
    const std::string_view line = raw.substr(pos, nl - pos);
    pos = nl + 1;

    const std::string_view candidate = StripDecoration(line);
    if (NormalizeHeader(candidate) == kEndOfProfile) break;
    const auto colon = candidate.find(':');
    int header = -1;
    if (colon != std::string_view::npos) {
      const std::string name = NormalizeHeader(candidate.substr(0, colon));
      for (std::size_t i = 0; i < kHeaders.size(); ++i) {
        if (name == kHeaders[i]) header = static_cast<int>(i);
      }
    }
    if (header >= 0) {
      if (seen[header]) {
        throw ProfileParseError(
            fmt::format("profile section {} appears more than once", kHeaders[header]), {});
      }
      seen[header] = true;
      current = header;
      std::string_view rest = candidate.substr(colon + 1);
      while (!rest.empty() && rest.front() == '*') rest.remove_prefix(1);
      sections[header] = std::string(Trim(rest));
    } else if (current >= 0) {
      auto& text = sections[current];
      if (!text.empty()) text += '\n';
      text += line;
    }
  }

  std::vector<ProfileSection> missing;
  for (auto s : kAllProfileSections) {
    auto& text = sections[Index(s)];
    text = std::string(Trim(text));
    if (text.empty()) missing.push_back(s);
  }
  if (!missing.empty()) {
    std::vector<std::string> names;
    for (auto s : missing) names.emplace_back(SectionHeader(s));
    throw ProfileParseError(
        fmt::format("profile response is missing sections: {}", Join(names, ", ")),
        std::move(missing));
  }
  return sections;
}

std::string ProfileReaskSuffix(const ProfileParseError& error) {
  return fmt::format(
      "\n\nFORMAT REMINDER: your previous reply could not be used ({}). Reply again with "
      "exactly the six sections TOPICAL_ENTITY_FOCUS:, CROSS_DOMAIN_CURIOSITY:, "
      "EXPLORATION_TENDENCY:, LISTENING_HABITS:, ENGAGEMENT_DEPTH:, FORMAT_PREFERENCES:, "
      "each non-empty and each used once, then a line containing only END_OF_PROFILE.\n",
      error.what());
}

std::string FormatProfileResponse(const ProfileSections& sections) {
  std::string out;
  for (auto s : kAllProfileSections) {
    out += fmt::format("{}: {}\n", SectionHeader(s), sections[Index(s)]);
  }
  out += kEndOfProfile;
  out += '\n';
  return out;
}

UserProfile GenerateProfile(const ProfileInput& input, Gateway& gateway,
                            const PromptTemplate& tmpl,
                            const ProfileGenerationOptions& options) {
  if (input.top_episodes.empty()) {
    throw InsufficientHistoryError(
        fmt::format("no episodes to profile for user '{}'", input.user_id));
  }
  const std::string prompt = RenderProfilePrompt(input, tmpl, options.prompt);
  GenerationRequest request{prompt, options.model_id, options.temperature,
                            options.max_output_tokens, "profile:" + input.user_id};

  UserProfile profile;
  profile.user_id = input.user_id;
  profile.source_episode_count = static_cast<int>(input.top_episodes.size());
  profile.generated_by = options.model_id;
  profile.generated_at = options.generated_at;
  profile.template_version = tmpl.version();

  std::string raw = gateway.Generate(request).text;
  try {
    profile.sections = ParseProfileResponse(raw);
    return profile;
  } catch (const ProfileParseError& first) {
    request.prompt = prompt + ProfileReaskSuffix(first);
    request.request_tag += ":reask";
    raw = gateway.Generate(request).text;
  }
  try {
    profile.sections = ParseProfileResponse(raw);
  } catch (const ProfileParseError& second) {
    throw UnparseableResponseError(
        fmt::format("unparseable profile for user '{}': {}", input.user_id, second.what()), raw);
  }
  return profile;
}

}  // namespace podjudge
