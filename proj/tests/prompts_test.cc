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
#include "podjudge/errors.h"
#include "podjudge/prompts.h"
#include "podjudge/util.h"
#include "test_support.h"

namespace podjudge {
namespace {

TEST_CASE("builtin templates are embedded") {
  const auto versions = BuiltinTemplateVersions();
  CHECK(versions == std::vector<std::string>{"pairwise.v1", "pointwise.v1", "profile.v1"});
  CHECK(LoadTemplate("profile.v1").text().find(markers::kTaskProfile) != std::string::npos);
  CHECK(LoadTemplate("pointwise.v1").text().find(markers::kTaskPointwise) != std::string::npos);
  CHECK(LoadTemplate("pairwise.v1").text().find(markers::kTaskPairwise) != std::string::npos);
  CHECK_THROWS_AS(LoadTemplate("nope.v9"), ConfigError);
}

TEST_CASE("embedded text equals the source file") {
  for (const auto& v : BuiltinTemplateVersions()) {
    const auto on_disk = ReadFile(std::filesystem::path(PODJUDGE_TEST_DATA) / ".." / ".." /
                                  "prompts" / (v + ".txt"));
    CHECK(LoadTemplate(v).text() == on_disk);
  }
}

TEST_CASE("templates load from a directory") {
  testing::TempDir dir;
  WriteFileAtomic(dir / "custom.v2.txt", "Hi {{name}}.");
  const auto t = LoadTemplate("custom.v2", dir.path());
  CHECK(t.version() == "custom.v2");
  CHECK(t.Render({{"name", "Ada"}}) == "Hi Ada.");
  CHECK_THROWS_AS(LoadTemplate("missing.v1", dir.path()), ConfigError);
}

TEST_CASE("render is single pass") {
  const PromptTemplate t("t.v1", "{{a}} and {{b}} and {{a}}");
  CHECK(t.Placeholders() == std::vector<std::string>{"a", "b"});
  CHECK(t.Render({{"a", "{{b}}"}, {"b", "x"}}) == "{{b}} and x and {{b}}");
  CHECK_THROWS_AS(t.Render({{"a", "1"}}), ConfigError);
  CHECK_THROWS_AS(PromptTemplate("t.v1", "{{open").Render({}), ConfigError);
  CHECK(PromptTemplate("t.v1", "no placeholders").Render({}) == "no placeholders");
}

TEST_CASE("every builtin placeholder is known") {
  const std::map<std::string, std::vector<std::string>> expected = {
      {"profile.v1", {"user_id", "show_count", "episode_count", "top_shows", "top_episodes"}},
  };
  for (const auto& [version, names] : expected) {
    CHECK(LoadTemplate(version).Placeholders() == names);
  }
}

TEST_CASE("block extraction") {
  const std::string text = "x\n### USER CONTEXT\nline one\n  line two\n### END USER CONTEXT\ny\n";
  const auto block = ExtractBlock(text, markers::kContextBegin, markers::kContextEnd);
  REQUIRE(block.has_value());
  CHECK(*block == "line one\n  line two\n");
  CHECK_FALSE(ExtractBlock("### USER CONTEXT\nno end", markers::kContextBegin,
                           markers::kContextEnd)
                  .has_value());
  CHECK_FALSE(ExtractBlock("nothing", markers::kContextBegin, markers::kContextEnd).has_value());
  CHECK(ExtractBlock("### LIST A\n### END LIST A", markers::kListABegin, markers::kListAEnd) ==
        std::string());
}

}  // namespace
}  // namespace podjudge
