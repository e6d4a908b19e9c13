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

// Record builders for metric and report tests, plus brute-force oracles that
// recompute every metric directly from its definition.

#ifndef PODJUDGE_TESTS_FIXTURES_H_
#define PODJUDGE_TESTS_FIXTURES_H_

#include <map>
#include <string>
#include <vector>

#include "podjudge/judge.h"
#include "podjudge/metrics.h"

namespace podjudge::testing {

inline const ModelPair kStudyPair{"rec-alpha", "rec-beta"};

inline Instant At(int minute) {
  return ParseRfc3339("2026-06-03T10:00:00Z") + std::chrono::minutes(minute);
}

inline PointwiseJudgment Pointwise(const std::string& user, const std::string& episode,
                                   Verdict verdict,
                                   JudgeVariant variant = JudgeVariant::kLaajProfile) {
  PointwiseJudgment j;
  j.user_id = user;
  j.episode_id = episode;
  j.verdict = verdict;
  j.confidence = verdict == Verdict::kAligned ? 1.0 : 0.0;
  j.judge_variant = variant;
  j.rationale = "fixture";
  j.template_version = "pointwise.v1";
  return j;
}

// `relative` is the judge's preference relative to the study pair.
inline PairwiseJudgment Pairwise(const std::string& user, Preference relative,
                                 JudgeVariant variant = JudgeVariant::kLaajProfile) {
  PairwiseJudgment j;
  j.user_id = user;
  j.assignment = ShuffleTags(kStudyPair.model_1, kStudyPair.model_2, 0);
  j.resolved_verdict = relative;
  j.tagged_verdict = TaggedVerdict::kTie;
  if (relative != Preference::kTie) {
    const bool first_is_a = j.assignment.tag_of_first_model == Tag::kA;
    const bool winner_first = relative == Preference::kModel1;
    j.tagged_verdict = winner_first == first_is_a ? TaggedVerdict::kA : TaggedVerdict::kB;
  }
  j.judge_variant = variant;
  j.template_version = "pairwise.v1";
  return j;
}

inline HumanAnnotation EpisodeRating(const std::string& user, const std::string& episode,
                                     int likert, int minute = 0) {
  HumanAnnotation a;
  a.user_id = user;
  a.kind = AnnotationKind::kEpisodeAlignment;
  a.episode_id = episode;
  a.likert = likert;
  a.annotated_at = At(minute);
  return a;
}

inline HumanAnnotation PreferenceRating(const std::string& user, Preference p, int minute = 0) {
  HumanAnnotation a;
  a.user_id = user;
  a.kind = AnnotationKind::kModelPreference;
  a.preference = p;
  a.annotated_at = At(minute);
  return a;
}

// Exhaustive pair counting straight from the Mann-Whitney definition.
inline double BruteForceAuc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t p = 0; p < scores.size(); ++p) {
    if (labels[p] != 1) continue;
    for (std::size_t n = 0; n < scores.size(); ++n) {
      if (labels[n] != 0) continue;
      pairs += 1.0;
      if (scores[p] > scores[n]) wins += 1.0;
      else if (scores[p] == scores[n]) wins += 0.5;
    }
  }
  return wins / pairs;
}

struct BruteSelection {
  int w = 0, t = 0, l = 0;
  double msa = 0.0;
};

inline BruteSelection BruteForceMsa(const std::vector<Preference>& judge,
                                    const std::vector<Preference>& human) {
  BruteSelection out;
  for (std::size_t i = 0; i < judge.size(); ++i) {
    if (judge[i] == Preference::kTie && human[i] == Preference::kTie) ++out.t;
    else if (judge[i] == human[i]) ++out.w;
    else ++out.l;
  }
  out.msa = static_cast<double>(out.w + out.t) / static_cast<double>(judge.size());
  return out;
}

}  // namespace podjudge::testing

#endif  // PODJUDGE_TESTS_FIXTURES_H_
