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

#include <cmath>

#include "doctest.h"
#include "fixtures.h"
#include "podjudge/errors.h"
#include "podjudge/metrics.h"

namespace podjudge {
namespace {

using testing::EpisodeRating;
using testing::kStudyPair;
using testing::Pairwise;
using testing::Pointwise;
using testing::PreferenceRating;

TEST_CASE("Likert mapping over every rating") {
  const struct {
    int likert;
    Verdict label;
    bool strong;
  } table[] = {{1, Verdict::kNotAligned, true},
               {2, Verdict::kNotAligned, false},
               {3, Verdict::kNotAligned, false},
               {4, Verdict::kAligned, false},
               {5, Verdict::kAligned, false}};
  for (const auto& row : table) {
    const auto got = MapLikertAlignment(row.likert);
    CHECK(got.label == row.label);
    CHECK(got.strong_misalignment == row.strong);
  }
  CHECK_THROWS_AS(MapLikertAlignment(0), ArgumentError);
  CHECK_THROWS_AS(MapLikertAlignment(6), ArgumentError);
}

TEST_CASE("ROC-AUC on the worked example") {
  const std::vector<double> scores = {0.9, 0.8, 0.3, 0.2};
  const std::vector<int> labels = {1, 0, 1, 0};
  // Pairs (pos, neg): (0.9,0.8) (0.9,0.2) (0.3,0.2) win, (0.3,0.8) loses.
  CHECK(RocAuc(scores, labels) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(RocAuc(scores, labels) == doctest::Approx(testing::BruteForceAuc(scores, labels)));
}

TEST_CASE("ROC-AUC edge cases") {
  CHECK(RocAuc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<int>{0, 0, 1, 1}) == 1.0);
  CHECK(RocAuc(std::vector<double>{0.5, 0.5, 0.5}, std::vector<int>{0, 1, 1}) == 0.5);
  CHECK_THROWS_AS(RocAuc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}),
                  UndefinedMetricError);
  CHECK_THROWS_AS(RocAuc(std::vector<double>{0.1, 0.2}, std::vector<int>{0, 0}),
                  UndefinedMetricError);
  CHECK_THROWS_AS(RocAuc(std::vector<double>{0.1}, std::vector<int>{0, 1}), ArgumentError);
  CHECK_THROWS_AS(RocAuc(std::vector<double>{}, std::vector<int>{}), UndefinedMetricError);
}

TEST_CASE("model selection agreement counts") {
  using P = Preference;
  const std::vector<P> judge = {P::kModel1, P::kModel2, P::kTie, P::kModel1};
  const std::vector<P> human = {P::kModel1, P::kModel1, P::kTie, P::kModel2};
  const auto got = ModelSelectionAgreement(judge, human);
  CHECK(got.wins == 1);
  CHECK(got.ties == 1);
  CHECK(got.losses == 2);
  CHECK(got.msa == 0.5);

  CHECK(ModelSelectionAgreement(judge, judge).msa == 1.0);
  CHECK_THROWS_AS(ModelSelectionAgreement(judge, std::vector<P>{P::kTie}), ArgumentError);
  CHECK_THROWS_AS(ModelSelectionAgreement(std::vector<P>{}, std::vector<P>{}),
                  UndefinedMetricError);
}

TEST_CASE("judge tie against a human preference is a loss") {
  using P = Preference;
  const auto got = ModelSelectionAgreement(std::vector<P>{P::kTie, P::kModel1},
                                           std::vector<P>{P::kModel2, P::kTie});
  CHECK(got.losses == 2);
  CHECK(got.msa == 0.0);
}

TEST_CASE("recall of strong misalignment") {
  using V = Verdict;
  const std::vector<V> judge = {V::kNotAligned, V::kAligned, V::kNotAligned, V::kAligned};
  const bool flags[] = {true, true, true, false};
  CHECK(RecallStrongMisalignment(judge, flags) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(RecallStrongMisalignment(judge, flags) - 0.6667) <= 1e-4);

  const bool all[] = {true, false, true, false};
  CHECK(RecallStrongMisalignment(judge, all) == 1.0);
  const bool accepted[] = {false, true, false, true};
  CHECK(RecallStrongMisalignment(judge, accepted) == 0.0);
  const bool none[] = {false, false, false, false};
  CHECK_THROWS_AS(RecallStrongMisalignment(judge, none), UndefinedMetricError);
}

TEST_CASE("confusion matrix on full agreement") {
  std::vector<PointwiseJudgment> judged;
  std::vector<HumanAnnotation> human;
  for (int i = 0; i < 10; ++i) {
    const auto ep = "ep-" + std::to_string(i);
    const bool aligned = i < 6;
    judged.push_back(Pointwise("u1", ep, aligned ? Verdict::kAligned : Verdict::kNotAligned));
    human.push_back(EpisodeRating("u1", ep, aligned ? 5 : 2));
  }
  const auto cm = ComputeConfusionMatrices(judged, {}, human, kStudyPair);
  CHECK(cm.pointwise[0][0] == 6);
  CHECK(cm.pointwise[1][1] == 4);
  CHECK(cm.pointwise[0][1] == 0);
  CHECK(cm.pointwise[1][0] == 0);
  CHECK(cm.n_pointwise == 10);
}

TEST_CASE("confusion matrix off-diagonal fraction fixture") {
  // 100 episodes: 75 agreements, 17 judged aligned but rated not aligned,
  // 8 the other way round.
  std::vector<PointwiseJudgment> judged;
  std::vector<HumanAnnotation> human;
  for (int i = 0; i < 100; ++i) {
    const auto ep = "ep-" + std::to_string(i);
    Verdict v;
    int likert;
    if (i < 40) { v = Verdict::kAligned; likert = 4; }
    else if (i < 75) { v = Verdict::kNotAligned; likert = 2; }
    else if (i < 92) { v = Verdict::kAligned; likert = 3; }
    else { v = Verdict::kNotAligned; likert = 5; }
    judged.push_back(Pointwise("u", ep, v));
    human.push_back(EpisodeRating("u", ep, likert));
  }
  const auto cm = ComputeConfusionMatrices(judged, {}, human, kStudyPair);
  CHECK(cm.pointwise[1][0] / 100.0 == doctest::Approx(0.17));
  CHECK((cm.pointwise[0][0] + cm.pointwise[1][1]) / 100.0 == doctest::Approx(0.75));
}

TEST_CASE("pairwise confusion with one judge tie and eight human ties") {
  std::vector<PairwiseJudgment> judged;
  std::vector<HumanAnnotation> human;
  for (int i = 0; i < 47; ++i) {
    const auto user = "u" + std::to_string(i);
    const Preference h = i < 8 ? Preference::kTie : (i % 2 ? Preference::kModel1
                                                             : Preference::kModel2);
    const Preference j = i == 0 ? Preference::kTie
                                : (i < 8 ? Preference::kModel1 : h);
    judged.push_back(Pairwise(user, j));
    human.push_back(PreferenceRating(user, h));
  }
  const auto cm = ComputeConfusionMatrices({}, judged, human, kStudyPair);
  int human_ties = 0;
  int judge_ties = 0;
  for (int c = 0; c < 3; ++c) human_ties += cm.pairwise[2][c];
  for (int r = 0; r < 3; ++r) judge_ties += cm.pairwise[r][2];
  CHECK(human_ties == 8);
  CHECK(judge_ties == 1);
  CHECK(cm.n_pairwise == 47);
}

TEST_CASE("joins keep the latest annotation and count unmatched records") {
  const std::vector<PointwiseJudgment> judged = {Pointwise("u", "a", Verdict::kAligned),
                                                 Pointwise("u", "b", Verdict::kAligned)};
  const std::vector<HumanAnnotation> human = {EpisodeRating("u", "a", 1, 0),
                                              EpisodeRating("u", "a", 5, 9),
                                              EpisodeRating("u", "c", 4, 1)};
  JoinCoverage coverage;
  const auto joined = JoinPointwise(judged, human, &coverage);
  REQUIRE(joined.size() == 1);
  CHECK(*joined[0].annotation->likert == 5);
  CHECK(coverage.pointwise_unmatched_judgments == 1);
  CHECK(coverage.pointwise_unmatched_annotations == 1);
}

TEST_CASE("pairwise join re-expresses swapped model order") {
  auto j = Pairwise("u", Preference::kModel1);
  // Same judgment recorded with the lists in the opposite order.
  j.assignment = ShuffleTags(kStudyPair.model_2, kStudyPair.model_1, 0);
  j.resolved_verdict = Preference::kModel1;  // first list = rec-beta
  const std::vector<PairwiseJudgment> judged = {j};
  const std::vector<HumanAnnotation> human = {PreferenceRating("u", Preference::kModel2)};
  const auto joined = JoinPairwise(judged, human, kStudyPair);
  REQUIRE(joined.size() == 1);
  CHECK(joined[0].judge == Preference::kModel2);

  auto stranger = Pairwise("v", Preference::kModel1);
  stranger.assignment = ShuffleTags("other-a", "other-b", 0);
  JoinCoverage coverage;
  const std::vector<PairwiseJudgment> foreign = {stranger};
  CHECK(JoinPairwise(foreign, human, kStudyPair, &coverage).empty());
  CHECK(coverage.pairwise_unmatched_judgments == 1);
}

TEST_CASE("empty join is an error") {
  const std::vector<PointwiseJudgment> judged = {Pointwise("u", "a", Verdict::kAligned)};
  const std::vector<HumanAnnotation> human = {EpisodeRating("v", "a", 4)};
  CHECK_THROWS_AS(ComputeConfusionMatrices(judged, {}, human, kStudyPair), DataError);
}

// Builds 47 pairwise cases with exactly (w, t, l).
void SelectionFixture(int w, int t, int l, std::vector<PairwiseJudgment>* judged,
                      std::vector<HumanAnnotation>* human) {
  int i = 0;
  const auto add = [&](Preference j, Preference h) {
    const auto user = "u" + std::to_string(i++);
    judged->push_back(Pairwise(user, j));
    human->push_back(PreferenceRating(user, h));
  };
  for (int k = 0; k < w; ++k) add(k % 2 ? Preference::kModel1 : Preference::kModel2,
                                  k % 2 ? Preference::kModel1 : Preference::kModel2);
  for (int k = 0; k < t; ++k) add(Preference::kTie, Preference::kTie);
  for (int k = 0; k < l; ++k) add(k % 3 == 0 ? Preference::kTie : Preference::kModel1,
                                  Preference::kModel2);
}

TEST_CASE("report reproduces the Table 1 MSA cell") {
  std::vector<PairwiseJudgment> pairwise;
  std::vector<HumanAnnotation> human;
  SelectionFixture(30, 1, 16, &pairwise, &human);
  std::vector<PointwiseJudgment> pointwise = {Pointwise("u0", "a", Verdict::kAligned),
                                              Pointwise("u0", "b", Verdict::kNotAligned)};
  human.push_back(EpisodeRating("u0", "a", 5));
  human.push_back(EpisodeRating("u0", "b", 1));
  const auto report =
      BuildReport(JudgeVariant::kLaajProfile, pointwise, pairwise, human, kStudyPair);
  CHECK(report.MsaCell() == "0.6596 (30/1/16)");
  CHECK(std::abs(*report.msa - 0.6596) <= 1e-4);
  CHECK(report.wins + report.ties + report.losses == report.n_pairwise);
  CHECK(report.auc_scoring == "binary");
  CHECK(report.roc_auc == 1.0);
  CHECK(report.rsm == 1.0);
}

TEST_CASE("report without pairwise data omits the pairwise fields") {
  const std::vector<PointwiseJudgment> pointwise = {Pointwise("u", "a", Verdict::kAligned),
                                                    Pointwise("u", "b", Verdict::kNotAligned)};
  const std::vector<HumanAnnotation> human = {EpisodeRating("u", "a", 4),
                                              EpisodeRating("u", "b", 1)};
  const auto report = BuildReport(JudgeVariant::kLaajProfile, pointwise, {}, human, kStudyPair);
  CHECK(report.n_pairwise == 0);
  CHECK_FALSE(report.msa.has_value());
  CHECK_FALSE(report.pairwise_confusion.has_value());
  const auto j = report.ToJson();
  CHECK_FALSE(j.contains("msa"));
  CHECK_FALSE(j.contains("pairwise_confusion"));
  CHECK(j.contains("roc_auc"));
  CHECK(report.MsaCell() == "n/a");
}

TEST_CASE("two variants over the same annotations share n") {
  std::vector<PointwiseJudgment> pointwise;
  std::vector<HumanAnnotation> human;
  for (int i = 0; i < 6; ++i) {
    const auto ep = "e" + std::to_string(i);
    pointwise.push_back(Pointwise("u", ep, i % 2 ? Verdict::kAligned : Verdict::kNotAligned,
                                  JudgeVariant::kLaajProfile));
    pointwise.push_back(Pointwise("u", ep, (i == 1 || i == 2) ? Verdict::kAligned : Verdict::kNotAligned,
                                  JudgeVariant::kLaajHistory));
    human.push_back(EpisodeRating("u", ep, i == 0 ? 1 : (i < 3 ? 4 : 2)));
  }
  const auto a = BuildReport(JudgeVariant::kLaajProfile, pointwise, {}, human, kStudyPair);
  const auto b = BuildReport(JudgeVariant::kLaajHistory, pointwise, {}, human, kStudyPair);
  CHECK(a.n_pointwise == 6);
  CHECK(b.n_pointwise == a.n_pointwise);
  CHECK(a.n_strong_misaligned == b.n_strong_misaligned);
  CHECK(a.judge_variant == JudgeVariant::kLaajProfile);
  CHECK(b.judge_variant == JudgeVariant::kLaajHistory);
  CHECK(b.pointwise_accuracy == 1.0);
}

TEST_CASE("report errors name the variant and the metric") {
  // Every human label is aligned, so AUC is undefined.
  const std::vector<PointwiseJudgment> pointwise = {
      Pointwise("u", "a", Verdict::kAligned, JudgeVariant::kSbertSim)};
  const std::vector<HumanAnnotation> human = {EpisodeRating("u", "a", 4)};
  try {
    BuildReport(JudgeVariant::kSbertSim, pointwise, {}, human, kStudyPair);
    FAIL("expected an error");
  } catch (const UndefinedMetricError& e) {
    const std::string what = e.what();
    CHECK(what.find("sbert_sim") != std::string::npos);
    CHECK(what.find("ROC-AUC") != std::string::npos);
  }
}

TEST_CASE("report JSON round trip and confidence scoring") {
  auto p1 = Pointwise("u", "a", Verdict::kAligned);
  p1.confidence = 0.8;
  p1.confidence_reported = true;
  auto p2 = Pointwise("u", "b", Verdict::kNotAligned);
  const std::vector<PointwiseJudgment> pointwise = {p1, p2};
  const std::vector<HumanAnnotation> human = {EpisodeRating("u", "a", 4),
                                              EpisodeRating("u", "b", 1)};
  std::vector<PairwiseJudgment> pairwise = {Pairwise("u", Preference::kModel1)};
  std::vector<HumanAnnotation> all = human;
  all.push_back(PreferenceRating("u", Preference::kModel1));
  const auto report = BuildReport(JudgeVariant::kLaajProfile, pointwise, pairwise, all,
                                  kStudyPair);
  CHECK(report.auc_scoring == "confidence");
  const auto back = AgreementReport::FromJson(report.ToJson());
  CHECK(back.ToJson() == report.ToJson());
  CHECK(report.ToMarkdown().find("| laaj_profile | 1.0000 | 1.0000 (1/0/0) | 1.0000 |") !=
        std::string::npos);
  CHECK(report.PairwiseConfusionCsv() ==
        "human,judge_model_1,judge_model_2,judge_tie\nmodel_1,1,0,0\nmodel_2,0,0,0\ntie,0,0,0\n");
}

TEST_CASE("human annotation JSON and invariants") {
  auto a = EpisodeRating("u", "e", 4);
  a.session_id = "tok";
  a.model_id = "rec-alpha";
  const nlohmann::json j = a;
  CHECK(j.at("kind") == "episode_alignment");
  const auto back = j.get<HumanAnnotation>();
  CHECK(back.episode_id == a.episode_id);
  CHECK(back.model_id == a.model_id);
  CHECK(back.annotated_at == a.annotated_at);

  auto bad = a;
  bad.likert = 7;
  CHECK_THROWS_AS(bad.Validate(), ValidationError);
  bad = a;
  bad.episode_id.reset();
  CHECK_THROWS_AS(bad.Validate(), ValidationError);
  HumanAnnotation pref = PreferenceRating("u", Preference::kTie);
  CHECK_NOTHROW(pref.Validate());
  pref.preference.reset();
  CHECK_THROWS_AS(pref.Validate(), ValidationError);
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"user_id":"u","kind":"episode_alignment",
      "episode_id":"e","likert":0,"annotated_at":"2026-01-01T00:00:00Z"})")
                      .get<HumanAnnotation>(),
                  ValidationError);
}

}  // namespace
}  // namespace podjudge
