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

#include "doctest.h"
#include "fake_providers.h"
#include "podjudge/profiler.h"

namespace podjudge {
namespace {

const char* kGood =
    "TOPICAL_ENTITY_FOCUS: Astronomy and NASA missions.\n"
    "CROSS_DOMAIN_CURIOSITY: Some jazz.\n"
    "EXPLORATION_TENDENCY: Sticks to a few shows.\n"
    "LISTENING_HABITS: Daily commute.\n"
    "ENGAGEMENT_DEPTH: Finishes episodes.\n"
    "FORMAT_PREFERENCES: Long interviews.\n"
    "END_OF_PROFILE\n";

ProfileInput MakeInput(int episodes, std::size_t description_len = 40) {
  ProfileInput in;
  in.user_id = "user-01";
  in.episode_budget = episodes;
  in.top_shows.push_back({{"s1", "Star Talk", "All about space", "Pub", {"astronomy"}}, 5000});
  for (int i = 0; i < episodes; ++i) {
    Episode e;
    e.episode_id = "e" + std::to_string(i);
    e.show_id = "s1";
    e.title = "Episode " + std::to_string(i);
    e.description = std::string(description_len, 'd');
    e.topic_tags = {"astronomy"};
    e.duration_seconds = 3600;
    in.top_episodes.push_back({e, 1000 - i, "Star Talk"});
  }
  return in;
}

TEST_CASE("well-formed response parses into six sections") {
  const auto s = ParseProfileResponse(kGood);
  CHECK(s[0] == "Astronomy and NASA missions.");
  CHECK(s[5] == "Long interviews.");
  CHECK(ParseProfileResponse(FormatProfileResponse(s)) == s);
}

TEST_CASE("decorated headers and multi-line sections") {
  const auto s = ParseProfileResponse(
      "Here is the profile.\n"
      "**Topical entity focus:** Chess.\nOpenings especially.\n"
      "## CROSS-DOMAIN CURIOSITY: Narrow.\n"
      "- EXPLORATION_TENDENCY: Specialist.\n"
      "LISTENING_HABITS: Evenings.\n"
      "ENGAGEMENT_DEPTH: Deep.\n"
      "FORMAT_PREFERENCES: Analysis.\n");
  CHECK(s[0] == "Chess.\nOpenings especially.");
  CHECK(s[1] == "Narrow.");
  CHECK(s[2] == "Specialist.");
}

TEST_CASE("missing, empty and repeated sections are rejected") {
  try {
    ParseProfileResponse("TOPICAL_ENTITY_FOCUS: x\nLISTENING_HABITS:\n");
    FAIL("expected a parse error");
  } catch (const ProfileParseError& e) {
    CHECK(e.missing().size() == 5);
    CHECK(e.missing()[0] == ProfileSection::kCrossDomainCuriosity);
  }
  const std::string repeated = std::string("TOPICAL_ENTITY_FOCUS: again\n") + kGood;
  CHECK_THROWS_AS(ParseProfileResponse(repeated), ProfileParseError);
  // Text after END_OF_PROFILE is ignored.
  CHECK_NOTHROW(ParseProfileResponse(std::string(kGood) + "TOPICAL_ENTITY_FOCUS: late\n"));
}

TEST_CASE("prompt lists episodes in rank order within the budget") {
  const auto tmpl = LoadTemplate("profile.v1");
  const auto prompt = RenderProfilePrompt(MakeInput(3), tmpl);
  const auto block = ExtractBlock(prompt, markers::kTopEpisodes, markers::kSummaryEnd);
  REQUIRE(block.has_value());
  const auto p0 = block->find("1. Episode 0");
  const auto p2 = block->find("3. Episode 2");
  CHECK(p0 != std::string::npos);
  CHECK(p2 != std::string::npos);
  CHECK(p0 < p2);
  CHECK(block->find("Tags: astronomy") != std::string::npos);
  CHECK(prompt.find("Episodes summarised: 3") != std::string::npos);
}

TEST_CASE("long descriptions are truncated per item") {
  const auto prompt = RenderProfilePrompt(MakeInput(1, 2000), LoadTemplate("profile.v1"));
  CHECK(prompt.find(std::string(500, 'd')) == std::string::npos);
  CHECK(prompt.find(std::string(497, 'd') + "...\n") != std::string::npos);
}

TEST_CASE("prompt is capped by dropping the lowest-ranked episodes") {
  const auto tmpl = LoadTemplate("profile.v1");
  const auto input = MakeInput(200, 500);
  const auto prompt = RenderProfilePrompt(input, tmpl);
  CHECK(prompt.size() <= 24000);
  CHECK(prompt.find("1. Episode 0 ") != std::string::npos);
  CHECK(prompt.find("Episode 199 ") == std::string::npos);
  CHECK(prompt.find("lower-ranked episodes omitted") != std::string::npos);
  ProfilePromptOptions tiny;
  tiny.prompt_char_cap = 100;
  CHECK_THROWS_AS(RenderProfilePrompt(input, tmpl, tiny), ArgumentError);
}

TEST_CASE("malformed reply is re-asked once") {
  auto text = std::make_shared<ScriptedText>(std::deque<std::string>{"garbage", kGood});
  Gateway gw(text, nullptr, ResponseCache());
  ProfileGenerationOptions opts;
  opts.generated_at = ParseRfc3339("2026-06-01T00:00:00Z");
  const auto p = GenerateProfile(MakeInput(2), gw, LoadTemplate("profile.v1"), opts);
  CHECK(text->calls == 2);
  CHECK(text->last_prompt.find("FORMAT REMINDER") != std::string::npos);
  CHECK(p.user_id == "user-01");
  CHECK(p.source_episode_count == 2);
  CHECK(p.template_version == "profile.v1");
  CHECK(p.generated_by == "gpt-4.1");
  CHECK(p.section(ProfileSection::kListeningHabits) == "Daily commute.");

  const nlohmann::json j = p;
  CHECK(j.at("topical_entity_focus") == "Astronomy and NASA missions.");
  CHECK(j.at("generated_at") == "2026-06-01T00:00:00Z");
  const auto back = j.get<UserProfile>();
  CHECK(back.sections == p.sections);
  CHECK(back.ContextText().rfind("Topical and named-entity focus: Astronomy", 0) == 0);
}

TEST_CASE("second malformed reply raises with the raw text") {
  auto text = std::make_shared<ScriptedText>(std::deque<std::string>{"garbage", "still bad"});
  Gateway gw(text, nullptr, ResponseCache());
  try {
    GenerateProfile(MakeInput(2), gw, LoadTemplate("profile.v1"));
    FAIL("expected an error");
  } catch (const UnparseableResponseError& e) {
    CHECK(e.raw() == "still bad");
  }
  CHECK(text->calls == 2);
}

TEST_CASE("profiles with empty sections are invalid JSON records") {
  nlohmann::json j = nlohmann::json::parse(
      R"({"user_id":"u","topical_entity_focus":"a","cross_domain_curiosity":"b",
          "exploration_tendency":"c","listening_habits":"d","engagement_depth":"e",
          "format_preferences":" ","source_episode_count":3,
          "generated_at":"2026-01-01T00:00:00Z"})");
  CHECK_THROWS_AS(j.get<UserProfile>(), DataError);
  j["format_preferences"] = "f";
  CHECK_NOTHROW(j.get<UserProfile>());
  j["source_episode_count"] = 0;
  CHECK_THROWS_AS(j.get<UserProfile>(), DataError);
}

}  // namespace
}  // namespace podjudge
