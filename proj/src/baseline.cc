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

#include "podjudge/baseline.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "podjudge/errors.h"
#include "podjudge/kernels.h"

namespace podjudge {

void SimilarityJudgmentConfig::Validate() const {
  if (!(threshold > -1.0 && threshold < 1.0)) {
    throw ArgumentError(fmt::format("threshold {} outside (-1, 1)", threshold));
  }
  if (!(tie_epsilon >= 0.0)) {
    throw ArgumentError(fmt::format("tie_epsilon {} must be >= 0", tie_epsilon));
  }
}

double Cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.dimension() != v.dimension()) {
    throw ArgumentError(
        fmt::format("dimension mismatch: {} vs {}", u.dimension(), v.dimension()));
  }
  const auto zero = [](const EmbeddingVector& x) {
    for (double value : x.values) {
      if (value != 0.0) return false;
    }
    return true;
  };
  if (u.values.empty() || zero(u) || zero(v)) {
    throw ArgumentError("cosine is undefined for a zero vector");
  }
  return kernels::CosineUnchecked(u.values, v.values);
}

std::string ProfileEmbeddingText(const UserProfile& profile) { return profile.PlainText(); }

std::string EpisodeEmbeddingText(const Episode& episode, std::string_view show_title,
                                 bool include_transcript) {
  std::string text = fmt::format("{}\n{}\n{}", episode.title, show_title, episode.description);
  if (include_transcript && episode.transcript_snippet) {
    text += '\n';
    text += *episode.transcript_snippet;
  }
  return text;
}

PointwiseJudgment SimilarityVerdict(std::string_view user_id, std::string_view episode_id,
                                    double cosine, const SimilarityJudgmentConfig& cfg) {
  PointwiseJudgment j;
  j.user_id = std::string(user_id);
  j.episode_id = std::string(episode_id);
  j.verdict = cosine > cfg.threshold ? Verdict::kAligned : Verdict::kNotAligned;
  j.confidence = std::clamp((cosine + 1.0) / 2.0, 0.0, 1.0);
  j.confidence_reported = true;
  j.rationale = fmt::format("cosine={:.6f}", cosine);
  j.judge_variant = JudgeVariant::kSbertSim;
  j.template_version = std::string(kSimilarityTemplateVersion);
  return j;
}

PointwiseJudgment SimPointwise(const UserProfile& profile, const Episode& episode,
                               std::string_view show_title, const SimilarityJudgmentConfig& cfg,
                               Gateway& gateway) {
  cfg.Validate();
  const auto u = gateway.Embed(ProfileEmbeddingText(profile), cfg.embedding_model_id);
  const auto v = gateway.Embed(EpisodeEmbeddingText(episode, show_title, cfg.include_transcript),
                               cfg.embedding_model_id);
  return SimilarityVerdict(profile.user_id, episode.episode_id, Cosine(u, v), cfg);
}

PairwiseJudgment SimilarityPairwiseVerdict(std::string_view user_id,
                                           const RecommendationList& list_1,
                                           const RecommendationList& list_2, double mean_1,
                                           double mean_2, const SimilarityJudgmentConfig& cfg) {
  PairwiseJudgment j;
  j.user_id = std::string(user_id);
  j.assignment = {0, Tag::kA, list_1.model_id, list_2.model_id};
  if (std::abs(mean_1 - mean_2) <= cfg.tie_epsilon) {
    j.tagged_verdict = TaggedVerdict::kTie;
  } else {
    j.tagged_verdict = mean_1 > mean_2 ? TaggedVerdict::kA : TaggedVerdict::kB;
  }
  j.resolved_verdict = Deshuffle(j.tagged_verdict, j.assignment);
  j.dimension_rationales = {
      {"mean cosine", fmt::format("{}={:.6f}; {}={:.6f}", list_1.model_id, mean_1,
                                  list_2.model_id, mean_2)}};
  j.judge_variant = JudgeVariant::kSbertSim;
  j.template_version = std::string(kSimilarityTemplateVersion);
  return j;
}

PairwiseJudgment SimPairwise(const UserProfile& profile, const RecommendationList& list_1,
                             const RecommendationList& list_2, const Corpus& corpus,
                             const SimilarityJudgmentConfig& cfg, Gateway& gateway) {
  cfg.Validate();
  if (list_1.episodes.empty() || list_2.episodes.empty()) {
    throw ArgumentError("similarity pairwise needs two non-empty lists");
  }
  if (list_1.user_id != list_2.user_id) {
    throw ArgumentError("lists belong to different users");
  }
  if (list_1.model_id == list_2.model_id) {
    throw ArgumentError(fmt::format("both lists come from model '{}'", list_1.model_id));
  }
  const auto u = gateway.Embed(ProfileEmbeddingText(profile), cfg.embedding_model_id);
  const auto mean = [&](const RecommendationList& list) {
    double sum = 0.0;
    for (const auto& id : list.episodes) {
      const Episode* episode = corpus.FindEpisode(id);
      if (episode == nullptr) throw DataError(fmt::format("unknown episode '{}'", id));
      const Show* show = corpus.FindShow(episode->show_id);
      const auto v = gateway.Embed(
          EpisodeEmbeddingText(*episode, show != nullptr ? show->title : "",
                               cfg.include_transcript),
          cfg.embedding_model_id);
      sum += Cosine(u, v);
    }
    return sum / static_cast<double>(list.episodes.size());
  };
  const double mean_1 = mean(list_1);
  const double mean_2 = mean(list_2);
  return SimilarityPairwiseVerdict(profile.user_id, list_1, list_2, mean_1, mean_2, cfg);
}

std::vector<PointwiseJudgment> SimPointwiseBatch(const std::vector<UserProfile>& profiles,
                                                 const std::vector<UserEpisode>& pairs,
                                                 const Corpus& corpus,
                                                 const SimilarityJudgmentConfig& cfg,
                                                 Gateway& gateway) {
  cfg.Validate();
  std::map<std::string, std::size_t> profile_row;
  std::map<std::string, std::size_t> episode_row;
  kernels::Matrix queries;
  kernels::Matrix items;
  const auto append = [](kernels::Matrix& m, const EmbeddingVector& v) {
    if (m.rows == 0) m.dim = v.dimension();
    if (v.dimension() != m.dim) throw ArgumentError("embedding dimension changed mid-batch");
    m.data.insert(m.data.end(), v.values.begin(), v.values.end());
    return m.rows++;
  };

  std::vector<std::size_t> query_of;
  std::vector<std::size_t> item_of;
  for (const auto& pair : pairs) {
    auto p = profile_row.find(pair.user_id);
    if (p == profile_row.end()) {
      const auto it = std::find_if(profiles.begin(), profiles.end(),
                                   [&](const UserProfile& u) { return u.user_id == pair.user_id; });
      if (it == profiles.end()) {
        throw DataError(fmt::format("no profile for user '{}'", pair.user_id));
      }
      const auto v = gateway.Embed(ProfileEmbeddingText(*it), cfg.embedding_model_id);
      p = profile_row.emplace(pair.user_id, append(queries, v)).first;
    }
    auto e = episode_row.find(pair.episode_id);
    if (e == episode_row.end()) {
      const Episode* episode = corpus.FindEpisode(pair.episode_id);
      if (episode == nullptr) throw DataError(fmt::format("unknown episode '{}'", pair.episode_id));
      const Show* show = corpus.FindShow(episode->show_id);
      const auto v = gateway.Embed(
          EpisodeEmbeddingText(*episode, show != nullptr ? show->title : "",
                               cfg.include_transcript),
          cfg.embedding_model_id);
      e = episode_row.emplace(pair.episode_id, append(items, v)).first;
    }
    query_of.push_back(p->second);
    item_of.push_back(e->second);
  }
  if (!pairs.empty() && queries.dim != items.dim) {
    throw ArgumentError("profile and episode embeddings differ in dimension");
  }
  for (std::size_t r = 0; r < queries.rows; ++r) {
    EmbeddingVector probe{std::vector<double>(queries.row(r).begin(), queries.row(r).end())};
    Cosine(probe, probe);  // rejects zero vectors
  }
  for (std::size_t r = 0; r < items.rows; ++r) {
    EmbeddingVector probe{std::vector<double>(items.row(r).begin(), items.row(r).end())};
    Cosine(probe, probe);
  }

  const auto scores = kernels::PairCosinesParallel(queries, items, query_of, item_of);
  std::vector<PointwiseJudgment> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.push_back(SimilarityVerdict(pairs[i].user_id, pairs[i].episode_id, scores[i], cfg));
  }
  return out;
}

}  // namespace podjudge
