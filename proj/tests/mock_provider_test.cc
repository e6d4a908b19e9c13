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
#include "podjudge/judge.h"
#include "podjudge/mock_provider.h"
#include "podjudge/util.h"
#include "test_support.h"

namespace podjudge {
namespace {

Episode Ep(const std::string& id, std::vector<std::string> tags) {
  Episode e;
  e.episode_id = id;
  e.show_id = "s";
  e.title = "Title " + id;
  e.topic_tags = std::move(tags);
  e.duration_seconds = 1200;
  return e;
}

UserProfile Profile(const std::string& focus) {
  UserProfile p;
  p.user_id = "u";
  p.sections = {focus, "b", "c", "d", "e", "f"};
  p.source_episode_count = 2;
  return p;
}

std::string Ask(MockJudgeProvider& mock, const std::string& prompt) {
  return mock.Complete({prompt, "m"});
}

TEST_CASE("tags are read from Tags: lines") {
  CHECK(TagsInBlock("1. x\n   Tags: jazz, true crime\nTags: (none)\nno tags here\n") ==
        std::vector<std::string>{"jazz", "true crime"});
  CHECK(TagsInBlock("").empty());
}

TEST_CASE("policy names") {
  CHECK(ParseMockPolicy("topic-overlap") == MockPolicy::kTopicOverlap);
  CHECK(ToString(MockPolicy::kEchoAligned) == "echo-aligned");
  CHECK_THROWS_AS(ParseMockPolicy("random"), ConfigError);
  CHECK(MockJudgeProvider(MockPolicy::kScripted).name() == "mock:scripted");
  CHECK_FALSE(MockJudgeProvider(MockPolicy::kScripted).remote());
}

TEST_CASE("synthesized profile parses and lists tags in rank order") {
  ProfileInput in;
  in.user_id = "u";
  in.episode_budget = 3;
  in.top_shows.push_back({{"s", "Show", "", "", {"x"}}, 900});
  in.top_episodes.push_back({Ep("e1", {"Chess"}), 600, "Show"});
  in.top_episodes.push_back({Ep("e2", {"jazz", "chess"}), 300, "Show"});
  MockJudgeProvider mock(MockPolicy::kTopicOverlap);
  const auto reply = Ask(mock, RenderProfilePrompt(in, LoadTemplate("profile.v1")));
  const auto sections = ParseProfileResponse(reply);
  CHECK(sections[0] == "Keeps returning to: Chess, jazz.");
  CHECK(sections[1] == "Interests span 2 distinct subject areas.");
  CHECK(sections[3] == "Recent listening covers 2 top-ranked episodes.");
  CHECK(sections[4] == "Listens to about 37 percent of each episode on average.");
  CHECK(sections[5] == "Favours episodes of roughly 20 minutes.");
}

TEST_CASE("pointwise topic overlap") {
  MockJudgeProvider mock(MockPolicy::kTopicOverlap);
  const auto ctx = JudgeContext::FromProfile(Profile("Keeps returning to: Jazz, chess."));
  const auto tmpl = LoadTemplate("pointwise.v1");
  const auto hit = ParsePointwiseResponse(
      Ask(mock, RenderPointwisePrompt(ctx, Ep("e", {"jazz"}), "S", tmpl)));
  CHECK(hit.verdict == Verdict::kAligned);
  CHECK(hit.rationale.find("jazz") != std::string::npos);
  const auto miss = ParsePointwiseResponse(
      Ask(mock, RenderPointwisePrompt(ctx, Ep("e", {"gardening"}), "S", tmpl)));
  CHECK(miss.verdict == Verdict::kNotAligned);
  // Tags outside the candidate block do not count.
  const auto none = ParsePointwiseResponse(
      Ask(mock, RenderPointwisePrompt(ctx, Ep("e", {}), "S", tmpl)));
  CHECK(none.verdict == Verdict::kNotAligned);

  MockJudgeProvider echo(MockPolicy::kEchoAligned);
  CHECK(ParsePointwiseResponse(Ask(echo, RenderPointwisePrompt(ctx, Ep("e", {}), "S", tmpl)))
            .verdict == Verdict::kAligned);
}

TEST_CASE("pairwise topic overlap counts hits per list") {
  const auto corpus = Corpus::FromRecords(
      {{"s", "S", "", "", {}}},
      {Ep("j1", {"jazz"}), Ep("j2", {"chess"}), Ep("g1", {"gardening"}), Ep("g2", {"jazz"})}, {});
  const auto ctx = JudgeContext::FromProfile(Profile("Keeps returning to: jazz, chess."));
  const auto tmpl = LoadTemplate("pairwise.v1");
  MockJudgeProvider mock(MockPolicy::kTopicOverlap);
  const RecommendationList two{"m1", "u", {"j1", "j2"}};
  const RecommendationList one{"m2", "u", {"g1", "g2"}};
  const RecommendationList also_one{"m3", "u", {"g2", "g1"}};
  CHECK(ParsePairwiseResponse(Ask(mock, RenderPairwisePrompt(ctx, two, one, corpus, tmpl)))
            .verdict == TaggedVerdict::kA);
  CHECK(ParsePairwiseResponse(Ask(mock, RenderPairwisePrompt(ctx, one, two, corpus, tmpl)))
            .verdict == TaggedVerdict::kB);
  CHECK(ParsePairwiseResponse(Ask(mock, RenderPairwisePrompt(ctx, one, also_one, corpus, tmpl)))
            .verdict == TaggedVerdict::kTie);
}

TEST_CASE("scripted responses are keyed by prompt hash") {
  testing::TempDir dir;
  nlohmann::json script = nlohmann::json::object();
  script[Sha256Hex("known prompt")] = "RATIONALE: r\nVERDICT: ALIGNED";
  WriteFileAtomic(dir / "script.json", script.dump());
  auto mock = MockJudgeProvider::FromScriptFile(dir / "script.json");
  CHECK(Ask(mock, "known prompt") == "RATIONALE: r\nVERDICT: ALIGNED");
  CHECK_THROWS_AS(Ask(mock, "other prompt"), ProviderError);
  WriteFileAtomic(dir / "bad.json", "[1,2");
  CHECK_THROWS_AS(MockJudgeProvider::FromScriptFile(dir / "bad.json"), ConfigError);
  MockJudgeProvider overlap(MockPolicy::kTopicOverlap);
  CHECK_THROWS_AS(Ask(overlap, "what is this?"), ProviderError);
}

}  // namespace
}  // namespace podjudge
