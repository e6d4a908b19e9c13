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

// Mutates well-formed judge replies and checks the parsers against a
// regex statement of the reply grammar.

#include "doctest.h"
#include "grammar_oracle.h"
#include "podjudge/judge.h"
#include "podjudge/util.h"

namespace podjudge {
namespace {

using testing::Mutator;
using testing::OraclePairwise;
using testing::OraclePointwise;

TEST_CASE("pointwise parser agrees with the grammar on 10000 mutated replies") {
  const std::vector<std::string> seeds = {
      "RATIONALE: The listener loves astronomy.\nVERDICT: ALIGNED\nCONFIDENCE: 0.8",
      "RATIONALE: Off topic.\nVERDICT: NOT_ALIGNED\nCONFIDENCE: 0.05\n",
      "Rationale: short\nVerdict: aligned",
      "RATIONALE: x\nVERDICT: NOT_ALIGNED",
  };
  Mutator mutate(20260601, {"RATIONALE:", "VERDICT:", "CONFIDENCE:", " ALIGNED", " NOT_ALIGNED",
                            " 0.5", " 1.5", " .25", "\n", "confidence: 1"});
  int accepted = 0;
  int rejected = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string raw = mutate.Mutate(seeds[i % seeds.size()]);
    const auto want = OraclePointwise(raw);
    CAPTURE(raw);
    if (!want.ok) {
      CHECK_THROWS_AS(ParsePointwiseResponse(raw), JudgmentParseError);
      ++rejected;
      continue;
    }
    ++accepted;
    ParsedPointwise got{};
    REQUIRE_NOTHROW(got = ParsePointwiseResponse(raw));
    CHECK(got.verdict == want.verdict);
    CHECK(got.rationale == want.rationale);
    CHECK(got.confidence == want.confidence);
  }
  // Both branches must be exercised for the comparison to mean anything.
  CHECK(accepted > 1000);
  CHECK(rejected > 1000);
}

TEST_CASE("pairwise parser agrees with the grammar on 10000 mutated replies") {
  const std::vector<std::string> seeds = {
      "TOPIC_MATCH: A is closer.\nFORMAT_STYLE_MATCH: Same.\nVARIETY: B varies.\nVERDICT: A",
      "topic_match: t\nformat_style_match: f\nvariety: v\nverdict: tie\n",
      "Thinking first.\nTOPIC_MATCH: t\nFORMAT_STYLE_MATCH: f\nVARIETY: v\nVERDICT: B",
  };
  Mutator mutate(7, {"TOPIC_MATCH:", "FORMAT_STYLE_MATCH:", "VARIETY:", "VERDICT:", " A", " B",
                     " TIE", "\n", " x"});
  int accepted = 0;
  int rejected = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string raw = mutate.Mutate(seeds[i % seeds.size()]);
    const auto want = OraclePairwise(raw);
    CAPTURE(raw);
    if (!want.ok) {
      CHECK_THROWS_AS(ParsePairwiseResponse(raw), JudgmentParseError);
      ++rejected;
      continue;
    }
    ++accepted;
    ParsedPairwise got{};
    REQUIRE_NOTHROW(got = ParsePairwiseResponse(raw));
    CHECK(got.verdict == want.verdict);
    REQUIRE(got.dimensions.size() == 3);
    for (int d = 0; d < 3; ++d) CHECK(got.dimensions[d].second == want.texts[d]);
  }
  CHECK(accepted > 1000);
  CHECK(rejected > 1000);
}

}  // namespace
}  // namespace podjudge
