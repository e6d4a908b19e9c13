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

// Non-LLM similarity judge: cosine between the embedded profile text and
// episode metadata, a fixed threshold for pointwise verdicts, and mean
// cosine per list for pairwise comparisons.

#ifndef PODJUDGE_BASELINE_H_
#define PODJUDGE_BASELINE_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "podjudge/corpus.h"
#include "podjudge/gateway.h"
#include "podjudge/judge.h"
#include "podjudge/profiler.h"

namespace podjudge {

struct SimilarityJudgmentConfig {
  double threshold = 0.5;
  double tie_epsilon = 0.01;
  std::string embedding_model_id = "hash-256";
  bool include_transcript = false;

  // ArgumentError unless threshold in (-1, 1) and tie_epsilon >= 0.
  void Validate() const;
};

inline constexpr std::string_view kSimilarityTemplateVersion = "cosine-threshold.v1";

// u.v / (|u||v|), clamped to [-1, 1]. ArgumentError on a dimension mismatch
// or a zero vector.
double Cosine(const EmbeddingVector& u, const EmbeddingVector& v);

// The six profile sections in canonical order, newline-joined.
std::string ProfileEmbeddingText(const UserProfile& profile);
// Episode title, show title, description (and transcript when enabled),
// newline-joined.
std::string EpisodeEmbeddingText(const Episode& episode, std::string_view show_title,
                                 bool include_transcript);

// Verdict aligned iff cosine > threshold (strict); confidence (cosine+1)/2.
PointwiseJudgment SimilarityVerdict(std::string_view user_id, std::string_view episode_id,
                                    double cosine, const SimilarityJudgmentConfig& cfg);

PointwiseJudgment SimPointwise(const UserProfile& profile, const Episode& episode,
                               std::string_view show_title, const SimilarityJudgmentConfig& cfg,
                               Gateway& gateway);

// Decision rule over list means: tie when |mean_1 - mean_2| <= tie_epsilon,
// otherwise the higher mean wins. The assignment is the identity (first
// list under tag A).
PairwiseJudgment SimilarityPairwiseVerdict(std::string_view user_id,
                                           const RecommendationList& list_1,
                                           const RecommendationList& list_2, double mean_1,
                                           double mean_2, const SimilarityJudgmentConfig& cfg);

PairwiseJudgment SimPairwise(const UserProfile& profile, const RecommendationList& list_1,
                             const RecommendationList& list_2, const Corpus& corpus,
                             const SimilarityJudgmentConfig& cfg, Gateway& gateway);

struct UserEpisode {
  std::string user_id;
  std::string episode_id;
};

// Pointwise judgments for many (user, episode) pairs. Embeddings go through
// the gateway (and its cache); cosines are computed by the OpenMP kernel.
// `profiles` must hold a profile for every user referenced.
std::vector<PointwiseJudgment> SimPointwiseBatch(const std::vector<UserProfile>& profiles,
                                                 const std::vector<UserEpisode>& pairs,
                                                 const Corpus& corpus,
                                                 const SimilarityJudgmentConfig& cfg,
                                                 Gateway& gateway);

}  // namespace podjudge

#endif  // PODJUDGE_BASELINE_H_
