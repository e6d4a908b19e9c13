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

#include <array>

#include "doctest.h"
#include "podjudge/config.h"
#include "podjudge/errors.h"
#include "test_support.h"

namespace podjudge {
namespace {

const std::string kMinimal = R"(
[run]
as_of = "2026-06-01T00:00:00Z"
[corpus]
shows = "s.jsonl"
episodes = "e.jsonl"
events = "ev.jsonl"
)";

RunConfig Parse(const std::string& extra) { return ParseConfig(kMinimal + extra, "/cfg"); }

TEST_CASE("minimal config takes defaults and resolves paths") {
  const auto c = ParseConfig(kMinimal, "/cfg");
  CHECK(c.as_of == ParseRfc3339("2026-06-01T00:00:00Z"));
  CHECK(c.window_days == 90);
  CHECK(c.variants.size() == 3);
  CHECK(c.corpus.shows == std::filesystem::path("/cfg/s.jsonl"));
  CHECK_FALSE(c.corpus.recommendations.has_value());
  CHECK(c.episode_budget == 20);
  CHECK(c.n_shows == 10);
  CHECK(c.list_depth == 3);
  CHECK(c.generator == "mock:topic-overlap");
  CHECK(c.embedder == "hash");
  CHECK(c.baseline.threshold == 0.5);
  CHECK(c.ablation_budgets == std::vector<int>{5, 10, 15, 20});
  CHECK(c.listen == "127.0.0.1:8080");
  CHECK(c.profile.generated_at == c.as_of);
  CHECK(c.source_text == kMinimal);
}

TEST_CASE("the bundled synthetic config loads") {
  const auto c = LoadConfig(std::filesystem::path(PODJUDGE_TEST_DATA) / "run.toml");
  CHECK(c.master_seed == 20260601);
  CHECK(c.models.model_1 == "rec-alpha");
  CHECK(c.models.model_2 == "rec-beta");
  CHECK(c.HasVariant(JudgeVariant::kSbertSim));
  CHECK(std::filesystem::exists(c.corpus.events));
  REQUIRE(c.annotations.has_value());
  CHECK(std::filesystem::exists(*c.annotations));
}

TEST_CASE("values are read") {
  const auto c = Parse(R"(
[profile]
episode_budget = 7
[judge]
list_depth = 2
history_cap = 12
[baseline]
threshold = 0.3
[providers]
generator = "mock:echo-aligned"
cache_dir = "cache"
[ablation]
budgets = [1, 2]
)");
  CHECK(c.episode_budget == 7);
  CHECK(c.list_depth == 2);
  CHECK(c.judge.history_cap == 12);
  CHECK(c.baseline.threshold == 0.3);
  CHECK(c.generator == "mock:echo-aligned");
  CHECK(c.cache_dir == std::filesystem::path("/cfg/cache"));
  CHECK(c.ablation_budgets == std::vector<int>{1, 2});
}

// Minimal valid config plus extra lines in [run] and [corpus] and any
// further sections.
std::string Compose(const std::string& run, const std::string& corpus, const std::string& rest) {
  return "[run]\nas_of = \"2026-06-01T00:00:00Z\"\n" + run +
         "[corpus]\nshows = \"s\"\nepisodes = \"e\"\nevents = \"v\"\n" + corpus + rest;
}

TEST_CASE("mistakes are config errors") {
  const std::vector<std::array<std::string, 3>> bad = {
      {"variants = [\"laaj_profile\", \"gpt_judge\"]\n", "", ""},
      {"variants = []\n", "", ""},
      {"window_days = 0\n", "", ""},
      {"as_of = \"yesterday\"\n", "", ""},
      {"", "colour = \"blue\"\n", ""},
      {"", "model_1 = \"a\"\nmodel_2 = \"a\"\n", ""},
      {"", "", "[extras]\nx = 1\n"},
      {"", "", "[profile]\nepisode_budget = \"many\"\n"},
      {"", "", "[baseline]\nthreshold = 1.5\n"},
      {"", "", "[providers]\ngenerator = \"mock:telepathy\"\n"},
      {"", "", "[providers]\ngenerator = \"openai\"\n"},
      {"", "", "[providers]\ngenerator = \"mock:scripted\"\n"},
      {"", "", "[providers]\nembedder = \"sbert\"\n"},
      {"", "", "[ablation]\nbudgets = []\n"},
      {"", "", "[ablation]\nbudgets = [0]\n"},
      {"", "", "this is not toml"},
  };
  CHECK_NOTHROW(ParseConfig(Compose("", "", ""), "/"));
  for (const auto& [run, corpus, rest] : bad) {
    const auto text = Compose(run, corpus, rest);
    CAPTURE(text);
    CHECK_THROWS_AS(ParseConfig(text, "/"), ConfigError);
  }
  CHECK_THROWS_AS(ParseConfig("[corpus]\nshows = \"s\"\nepisodes = \"e\"\nevents = \"v\"\n", "/"),
                  ConfigError);
  CHECK_THROWS_AS(ParseConfig("[run]\nas_of = \"2026-06-01T00:00:00Z\"\n", "/"), ConfigError);
  CHECK_THROWS_AS(LoadConfig("/nonexistent/run.toml"), ConfigError);
}

TEST_CASE("unknown variant message lists the valid names") {
  try {
    ParseConfig("[run]\nas_of = \"2026-06-01T00:00:00Z\"\nvariants = [\"x\"]\n[corpus]\n"
                "shows = \"s\"\nepisodes = \"e\"\nevents = \"v\"\n",
                "/");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("laaj_profile") != std::string::npos);
  }
}

}  // namespace
}  // namespace podjudge
