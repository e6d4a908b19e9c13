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

// Agreement between a judge and human annotations: Likert binarization,
// ROC-AUC, model selection agreement with win/tie/loss counts, recall of
// strong misalignment, confusion matrices, and report assembly.

#ifndef PODJUDGE_METRICS_H_
#define PODJUDGE_METRICS_H_

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "podjudge/judge.h"
#include "podjudge/util.h"

namespace podjudge {

enum class AnnotationKind { kEpisodeAlignment, kProfileAccuracy, kModelPreference };

std::string_view ToString(AnnotationKind kind);
AnnotationKind ParseAnnotationKind(std::string_view s);

struct HumanAnnotation {
  std::string user_id;
  AnnotationKind kind = AnnotationKind::kEpisodeAlignment;
  std::optional<std::string> episode_id;
  std::optional<int> likert;                 // 1 = Strongly Disagree ... 5 = Strongly Agree
  std::optional<Preference> preference;      // relative to the study's model pair
  Instant annotated_at{};
  // Optional provenance written by the annotation service.
  std::optional<std::string> session_id;
  std::optional<std::string> model_id;       // list the rated episode was shown in
  std::optional<std::string> question;       // profile_accuracy question id

  // ValidationError when a kind's required fields are missing or the
  // Likert value is outside 1..5.
  void Validate() const;
};

void to_json(nlohmann::json& j, const HumanAnnotation& a);
void from_json(const nlohmann::json& j, HumanAnnotation& a);

struct LikertLabel {
  Verdict label;
  bool strong_misalignment;
};

// {4,5} -> aligned, {1,2,3} -> not aligned; strong misalignment iff 1.
LikertLabel MapLikertAlignment(int likert);

// Tie-aware Mann-Whitney AUC. Labels are 0/1. UndefinedMetricError when only
// one class is present; ArgumentError on length mismatch.
double RocAuc(std::span<const double> scores, std::span<const int> labels);

struct SelectionAgreement {
  double msa = 0.0;
  int wins = 0;    // same non-tie preference
  int ties = 0;    // both tie
  int losses = 0;  // everything else
};

// msa = (wins + ties) / n. UndefinedMetricError for n = 0.
SelectionAgreement ModelSelectionAgreement(std::span<const Preference> judge,
                                           std::span<const Preference> human);

// Fraction of human-flagged episodes the judge rejected.
// UndefinedMetricError when nothing is flagged.
double RecallStrongMisalignment(std::span<const Verdict> judge,
                                std::span<const bool> human_flags);

// [human][judge]; indices follow the enum order (aligned, not_aligned) and
// (model_1, model_2, tie).
using PointwiseConfusion = std::array<std::array<int, 2>, 2>;
using PairwiseConfusion = std::array<std::array<int, 3>, 3>;

// Study model pair; human preferences are expressed relative to it.
struct ModelPair {
  std::string model_1;
  std::string model_2;
};

struct JoinedPointwise {
  const PointwiseJudgment* judgment;
  const HumanAnnotation* annotation;
};

struct JoinedPairwise {
  const PairwiseJudgment* judgment;
  const HumanAnnotation* annotation;
  Preference judge;  // re-expressed relative to the study model pair
};

struct JoinCoverage {
  int pointwise_unmatched_judgments = 0;
  int pointwise_unmatched_annotations = 0;
  int pairwise_unmatched_judgments = 0;
  int pairwise_unmatched_annotations = 0;
};

// Joins on (user_id, episode_id); for repeated annotations the latest
// annotated_at wins. Output is sorted by (user_id, episode_id).
std::vector<JoinedPointwise> JoinPointwise(std::span<const PointwiseJudgment> judgments,
                                           std::span<const HumanAnnotation> annotations,
                                           JoinCoverage* coverage = nullptr);

// Joins on user_id. Judgments whose models are not the study pair are
// skipped and counted as unmatched.
std::vector<JoinedPairwise> JoinPairwise(std::span<const PairwiseJudgment> judgments,
                                         std::span<const HumanAnnotation> annotations,
                                         const ModelPair& models,
                                         JoinCoverage* coverage = nullptr);

struct ConfusionMatrices {
  PointwiseConfusion pointwise{};
  PairwiseConfusion pairwise{};
  int n_pointwise = 0;
  int n_pairwise = 0;
  JoinCoverage coverage;
};

// DataError when neither join matches anything.
ConfusionMatrices ComputeConfusionMatrices(std::span<const PointwiseJudgment> pointwise,
                                           std::span<const PairwiseJudgment> pairwise,
                                           std::span<const HumanAnnotation> annotations,
                                           const ModelPair& models);

struct AgreementReport {
  JudgeVariant judge_variant = JudgeVariant::kLaajProfile;
  int n_pointwise = 0;
  int n_pairwise = 0;
  double roc_auc = 0.0;
  std::string auc_scoring;  // "binary" or "confidence"
  double pointwise_accuracy = 0.0;
  double rsm = 0.0;
  int n_strong_misaligned = 0;
  // Pairwise fields are absent when n_pairwise == 0.
  std::optional<double> msa;
  int wins = 0;
  int ties = 0;
  int losses = 0;
  PointwiseConfusion pointwise_confusion{};
  std::optional<PairwiseConfusion> pairwise_confusion;
  JoinCoverage coverage;

  nlohmann::json ToJson() const;
  static AgreementReport FromJson(const nlohmann::json& j);
  // "0.6596 (30/1/16)", or "n/a" without pairwise data.
  std::string MsaCell() const;
  std::string ToMarkdown() const;
  std::string PointwiseConfusionCsv() const;
  std::string PairwiseConfusionCsv() const;
};

// Filters judgments to `variant`, joins, and computes every metric. Metric
// errors propagate with the variant and metric named in the message.
AgreementReport BuildReport(JudgeVariant variant, std::span<const PointwiseJudgment> pointwise,
                            std::span<const PairwiseJudgment> pairwise,
                            std::span<const HumanAnnotation> annotations,
                            const ModelPair& models);

// Markdown table with one row per report.
std::string ReportsTable(std::span<const AgreementReport> reports);

}  // namespace podjudge

#endif  // PODJUDGE_METRICS_H_
