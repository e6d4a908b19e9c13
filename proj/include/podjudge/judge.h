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

// LLM judging: context rendering for the profile and history variants,
// pointwise verdicts, seeded A/B tag shuffling, pairwise list comparison,
// and the shared response grammar.

#ifndef PODJUDGE_JUDGE_H_
#define PODJUDGE_JUDGE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "podjudge/corpus.h"
#include "podjudge/errors.h"
#include "podjudge/gateway.h"
#include "podjudge/profiler.h"
#include "podjudge/prompts.h"

namespace podjudge {

enum class Verdict { kAligned, kNotAligned };
enum class JudgeVariant { kLaajProfile, kLaajHistory, kSbertSim };
enum class Tag { kA, kB };
enum class TaggedVerdict { kA, kB, kTie };
// Relative to the argument order of a pairwise call (model_1 = first list).
enum class Preference { kModel1, kModel2, kTie };

std::string_view ToString(Verdict v);
std::string_view ToString(JudgeVariant v);
std::string_view ToString(Tag t);
std::string_view ToString(TaggedVerdict v);
std::string_view ToString(Preference p);
Verdict ParseVerdict(std::string_view s);
JudgeVariant ParseJudgeVariant(std::string_view s);
Tag ParseTag(std::string_view s);
TaggedVerdict ParseTaggedVerdict(std::string_view s);
Preference ParsePreference(std::string_view s);

struct HistoryItem {
  std::string show_title;
  std::string episode_title;
  std::string excerpt;
};

enum class ContextKind { kProfile, kHistory };

struct JudgeContext {
  ContextKind kind = ContextKind::kProfile;
  std::optional<UserProfile> profile;
  std::vector<HistoryItem> history_items;  // most recent first
  std::string user_id;

  static JudgeContext FromProfile(UserProfile profile);
  // One item per distinct episode in the history, ordered by the episode's
  // latest listen (most recent first). Excerpts are description prefixes.
  static JudgeContext FromHistory(const UserHistory& history, const Corpus& corpus,
                                  std::size_t excerpt_budget = 200);

  JudgeVariant variant() const;
  // ArgumentError unless the kind/payload invariants hold.
  void Validate() const;
};

struct PointwiseJudgment {
  std::string user_id;
  std::string episode_id;
  Verdict verdict = Verdict::kNotAligned;
  double confidence = 0.0;
  // False when the response carried no CONFIDENCE and the binary default
  // (1.0 aligned / 0.0 not aligned) was used.
  bool confidence_reported = false;
  std::string rationale;
  JudgeVariant judge_variant = JudgeVariant::kLaajProfile;
  std::string template_version;
  std::string raw_response;
};

struct TagAssignment {
  std::uint64_t seed = 0;
  Tag tag_of_first_model = Tag::kA;
  std::string model_under_tag_a;
  std::string model_under_tag_b;

  std::string model_1() const;
  std::string model_2() const;
  const std::string& model_under(Tag t) const;
};

struct PairwiseJudgment {
  std::string user_id;
  TagAssignment assignment;
  std::vector<std::pair<std::string, std::string>> dimension_rationales;
  TaggedVerdict tagged_verdict = TaggedVerdict::kTie;
  Preference resolved_verdict = Preference::kTie;
  JudgeVariant judge_variant = JudgeVariant::kLaajProfile;
  std::string template_version;
  std::string raw_response;

  // Winning model id, nullopt for a tie.
  std::optional<std::string> winner() const;
};

void to_json(nlohmann::json& j, const PointwiseJudgment& p);
void from_json(const nlohmann::json& j, PointwiseJudgment& p);
void to_json(nlohmann::json& j, const TagAssignment& a);
void from_json(const nlohmann::json& j, TagAssignment& a);
void to_json(nlohmann::json& j, const PairwiseJudgment& p);
// Rejects records whose resolved_verdict disagrees with
// Deshuffle(tagged_verdict, assignment).
void from_json(const nlohmann::json& j, PairwiseJudgment& p);

// Deterministic in `seed`: bit 63 of SplitMix64(seed) decides whether the
// first model gets tag A. ArgumentError when the models are equal.
TagAssignment ShuffleTags(std::string_view model_1, std::string_view model_2,
                          std::uint64_t seed);

// Maps a verdict over tags back to argument order.
Preference Deshuffle(TaggedVerdict verdict, const TagAssignment& assignment);

// Per-(user, model pair) seed from the run's master seed. Independent of
// the order in which the two models are given.
std::uint64_t DeriveEvaluationSeed(std::uint64_t master_seed, std::string_view user_id,
                                   std::string_view model_1, std::string_view model_2);

// Grammar (markers case-insensitive, each at most once):
//   [preamble] RATIONALE: <non-empty text> VERDICT: ALIGNED|NOT_ALIGNED
//   [CONFIDENCE: <decimal in [0,1]>] [whitespace]
class JudgmentParseError : public DataError {
 public:
  using DataError::DataError;
};

struct ParsedPointwise {
  Verdict verdict;
  std::optional<double> confidence;
  std::string rationale;
};
ParsedPointwise ParsePointwiseResponse(std::string_view raw);

// Grammar (markers case-insensitive, each exactly once, in this order):
//   [preamble] TOPIC_MATCH: <text> FORMAT_STYLE_MATCH: <text> VARIETY: <text>
//   VERDICT: A|B|TIE [whitespace]
struct ParsedPairwise {
  std::vector<std::pair<std::string, std::string>> dimensions;
  TaggedVerdict verdict;
};
ParsedPairwise ParsePairwiseResponse(std::string_view raw);

inline constexpr std::string_view kDimensionTopicMatch = "topic match";
inline constexpr std::string_view kDimensionFormatStyle = "format/style match";
inline constexpr std::string_view kDimensionVariety = "variety";

struct JudgeOptions {
  std::string model_id = "gpt-4.1";
  double temperature = 0.0;
  int max_output_tokens = 1200;
  std::size_t history_cap = 30;
  std::size_t description_budget = 500;
  std::size_t transcript_budget = 1000;
  std::size_t title_budget = 200;
};

std::string RenderContext(const JudgeContext& ctx, const JudgeOptions& options);

std::string RenderPointwisePrompt(const JudgeContext& ctx, const Episode& episode,
                                  std::string_view show_title, const PromptTemplate& tmpl,
                                  const JudgeOptions& options = {});

// Re-ask text appended to the original prompt after a parse failure.
std::string PointwiseReaskSuffix(const JudgmentParseError& error);
std::string PairwiseReaskSuffix(const JudgmentParseError& error);

PointwiseJudgment JudgePointwise(const JudgeContext& ctx, const Episode& episode,
                                 std::string_view show_title, Gateway& gateway,
                                 const PromptTemplate& tmpl, const JudgeOptions& options = {});

// Lists are shown under their tags: the list of model_under_tag_a as LIST A.
std::string RenderPairwisePrompt(const JudgeContext& ctx, const RecommendationList& under_a,
                                 const RecommendationList& under_b, const Corpus& corpus,
                                 const PromptTemplate& tmpl, const JudgeOptions& options = {});

// Shuffles tags with `seed`, renders, generates (one re-ask on parse
// failure), and de-shuffles.
PairwiseJudgment JudgePairwise(const JudgeContext& ctx, const RecommendationList& list_1,
                               const RecommendationList& list_2, const Corpus& corpus,
                               Gateway& gateway, std::uint64_t seed,
                               const PromptTemplate& tmpl, const JudgeOptions& options = {});

// Same, with a fixed assignment. The assignment's two models must be exactly
// the two list models; tag_of_first_model is recomputed for this argument
// order.
PairwiseJudgment JudgePairwise(const JudgeContext& ctx, const RecommendationList& list_1,
                               const RecommendationList& list_2, const Corpus& corpus,
                               Gateway& gateway, const TagAssignment& assignment,
                               const PromptTemplate& tmpl, const JudgeOptions& options = {});

}  // namespace podjudge

#endif  // PODJUDGE_JUDGE_H_
