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

#include "podjudge/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>

#include <fmt/format.h>

#include "podjudge/errors.h"

namespace podjudge {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 3> kKindNames = {"episode_alignment",
                                                        "profile_accuracy",
                                                        "model_preference"};

std::string Fixed4(double v) { return fmt::format("{:.4f}", v); }

Preference Swap(Preference p) {
  switch (p) {
    case Preference::kModel1: return Preference::kModel2;
    case Preference::kModel2: return Preference::kModel1;
    case Preference::kTie: return Preference::kTie;
  }
  return p;
}

template <std::size_t R, std::size_t C>
json MatrixJson(const std::array<std::array<int, C>, R>& m) {
  json rows = json::array();
  for (const auto& row : m) rows.push_back(json(std::vector<int>(row.begin(), row.end())));
  return rows;
}

template <std::size_t R, std::size_t C>
std::array<std::array<int, C>, R> MatrixFromJson(const json& j) {
  std::array<std::array<int, C>, R> m{};
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t c = 0; c < C; ++c) m[r][c] = j.at(r).at(c).get<int>();
  }
  return m;
}

}  // namespace

std::string_view ToString(AnnotationKind kind) { return kKindNames[static_cast<int>(kind)]; }

AnnotationKind ParseAnnotationKind(std::string_view s) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (s == kKindNames[i]) return static_cast<AnnotationKind>(i);
  }
  throw ValidationError(fmt::format("unknown annotation kind '{}'", s));
}

void HumanAnnotation::Validate() const {
  if (user_id.empty()) throw ValidationError("annotation has an empty user_id");
  if (likert && (*likert < 1 || *likert > 5)) {
    throw ValidationError(fmt::format("likert {} outside 1..5", *likert));
  }
  switch (kind) {
    case AnnotationKind::kEpisodeAlignment:
      if (!episode_id || episode_id->empty()) {
        throw ValidationError("episode_alignment annotation needs an episode_id");
      }
      if (!likert) throw ValidationError("episode_alignment annotation needs a likert value");
      break;
    case AnnotationKind::kProfileAccuracy:
      if (!likert) throw ValidationError("profile_accuracy annotation needs a likert value");
      break;
    case AnnotationKind::kModelPreference:
      if (!preference) throw ValidationError("model_preference annotation needs a preference");
      break;
  }
}

void to_json(json& j, const HumanAnnotation& a) {
  j = json::object();
  j["user_id"] = a.user_id;
  j["kind"] = ToString(a.kind);
  if (a.episode_id) j["episode_id"] = *a.episode_id;
  if (a.likert) j["likert"] = *a.likert;
  if (a.preference) j["preference"] = ToString(*a.preference);
  j["annotated_at"] = FormatRfc3339(a.annotated_at);
  if (a.session_id) j["session_id"] = *a.session_id;
  if (a.model_id) j["model_id"] = *a.model_id;
  if (a.question) j["question"] = *a.question;
}

void from_json(const json& j, HumanAnnotation& a) {
  const auto opt_string = [&](const char* key) -> std::optional<std::string> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<std::string>();
  };
  a.user_id = j.at("user_id").get<std::string>();
  a.kind = ParseAnnotationKind(j.at("kind").get<std::string>());
  a.episode_id = opt_string("episode_id");
  a.likert = j.contains("likert") && !j.at("likert").is_null()
                 ? std::optional<int>(j.at("likert").get<int>())
                 : std::nullopt;
  const auto pref = opt_string("preference");
  a.preference = pref ? std::optional<Preference>(ParsePreference(*pref)) : std::nullopt;
  a.annotated_at = ParseRfc3339(j.at("annotated_at").get<std::string>());
  a.session_id = opt_string("session_id");
  a.model_id = opt_string("model_id");
  a.question = opt_string("question");
  a.Validate();
}

LikertLabel MapLikertAlignment(int likert) {
  if (likert < 1 || likert > 5) {
    throw ArgumentError(fmt::format("likert {} outside 1..5", likert));
  }
  return {likert >= 4 ? Verdict::kAligned : Verdict::kNotAligned, likert == 1};
}

double RocAuc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw ArgumentError(fmt::format("{} scores but {} labels", scores.size(), labels.size()));
  }
  std::size_t positives = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw ArgumentError("labels must be 0 or 1");
    if (std::isnan(scores[i])) throw ArgumentError("score is NaN");
    positives += static_cast<std::size_t>(labels[i]);
  }
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw UndefinedMetricError("undefined AUC: labels contain a single class");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of (1-based) midranks of the positives.
  double positive_rank_sum = 0.0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start;
    while (end < order.size() && scores[order[end]] == scores[order[start]]) ++end;
    const double midrank = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t k = start; k < end; ++k) {
      if (labels[order[k]] == 1) positive_rank_sum += midrank;
    }
    start = end;
  }
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

SelectionAgreement ModelSelectionAgreement(std::span<const Preference> judge,
                                           std::span<const Preference> human) {
  if (judge.size() != human.size()) {
    throw ArgumentError(fmt::format("{} judge verdicts but {} human preferences", judge.size(),
                                    human.size()));
  }
  if (judge.empty()) throw UndefinedMetricError("undefined MSA: no pairwise cases");
  SelectionAgreement out;
  for (std::size_t i = 0; i < judge.size(); ++i) {
    if (judge[i] == human[i]) {
      (judge[i] == Preference::kTie ? out.ties : out.wins)++;
    } else {
      ++out.losses;
    }
  }
  out.msa = static_cast<double>(out.wins + out.ties) / static_cast<double>(judge.size());
  return out;
}

double RecallStrongMisalignment(std::span<const Verdict> judge,
                                std::span<const bool> human_flags) {
  if (judge.size() != human_flags.size()) {
    throw ArgumentError(fmt::format("{} judge verdicts but {} human flags", judge.size(),
                                    human_flags.size()));
  }
  int flagged = 0;
  int caught = 0;
  for (std::size_t i = 0; i < judge.size(); ++i) {
    if (!human_flags[i]) continue;
    ++flagged;
    if (judge[i] == Verdict::kNotAligned) ++caught;
  }
  if (flagged == 0) throw UndefinedMetricError("undefined RSM: no strongly misaligned episodes");
  return static_cast<double>(caught) / static_cast<double>(flagged);
}

std::vector<JoinedPointwise> JoinPointwise(std::span<const PointwiseJudgment> judgments,
                                           std::span<const HumanAnnotation> annotations,
                                           JoinCoverage* coverage) {
  std::map<std::pair<std::string, std::string>, const HumanAnnotation*> human;
  for (const auto& a : annotations) {
    if (a.kind != AnnotationKind::kEpisodeAlignment) continue;
    auto& slot = human[{a.user_id, *a.episode_id}];
    if (slot == nullptr || a.annotated_at >= slot->annotated_at) slot = &a;
  }
  std::map<std::pair<std::string, std::string>, const PointwiseJudgment*> judged;
  int duplicate_judgments = 0;
  for (const auto& j : judgments) {
    auto [it, inserted] = judged.emplace(std::make_pair(j.user_id, j.episode_id), &j);
    if (!inserted) ++duplicate_judgments;
  }
  std::vector<JoinedPointwise> out;
  int unmatched_judgments = duplicate_judgments;
  for (const auto& [key, judgment] : judged) {
    const auto it = human.find(key);
    if (it == human.end()) {
      ++unmatched_judgments;
      continue;
    }
    out.push_back({judgment, it->second});
  }
  if (coverage != nullptr) {
    coverage->pointwise_unmatched_judgments = unmatched_judgments;
    coverage->pointwise_unmatched_annotations =
        static_cast<int>(human.size()) - static_cast<int>(out.size());
  }
  return out;
}

std::vector<JoinedPairwise> JoinPairwise(std::span<const PairwiseJudgment> judgments,
                                         std::span<const HumanAnnotation> annotations,
                                         const ModelPair& models, JoinCoverage* coverage) {
  std::map<std::string, const HumanAnnotation*> human;
  for (const auto& a : annotations) {
    if (a.kind != AnnotationKind::kModelPreference) continue;
    auto& slot = human[a.user_id];
    if (slot == nullptr || a.annotated_at >= slot->annotated_at) slot = &a;
  }
  std::map<std::string, std::pair<const PairwiseJudgment*, Preference>> judged;
  int unmatched_judgments = 0;
  for (const auto& j : judgments) {
    Preference relative;
    if (j.assignment.model_1() == models.model_1 && j.assignment.model_2() == models.model_2) {
      relative = j.resolved_verdict;
    } else if (j.assignment.model_1() == models.model_2 &&
               j.assignment.model_2() == models.model_1) {
      relative = Swap(j.resolved_verdict);
    } else {
      ++unmatched_judgments;
      continue;
    }
    if (!judged.emplace(j.user_id, std::make_pair(&j, relative)).second) ++unmatched_judgments;
  }
  std::vector<JoinedPairwise> out;
  for (const auto& [user, entry] : judged) {
    const auto it = human.find(user);
    if (it == human.end()) {
      ++unmatched_judgments;
      continue;
    }
    out.push_back({entry.first, it->second, entry.second});
  }
  if (coverage != nullptr) {
    coverage->pairwise_unmatched_judgments = unmatched_judgments;
    coverage->pairwise_unmatched_annotations =
        static_cast<int>(human.size()) - static_cast<int>(out.size());
  }
  return out;
}

ConfusionMatrices ComputeConfusionMatrices(std::span<const PointwiseJudgment> pointwise,
                                           std::span<const PairwiseJudgment> pairwise,
                                           std::span<const HumanAnnotation> annotations,
                                           const ModelPair& models) {
  ConfusionMatrices out;
  const auto point = JoinPointwise(pointwise, annotations, &out.coverage);
  const auto pair = JoinPairwise(pairwise, annotations, models, &out.coverage);
  if (point.empty() && pair.empty()) {
    throw DataError("judgments and annotations share no records");
  }
  for (const auto& jp : point) {
    const auto human = MapLikertAlignment(*jp.annotation->likert).label;
    ++out.pointwise[static_cast<int>(human)][static_cast<int>(jp.judgment->verdict)];
  }
  for (const auto& jp : pair) {
    ++out.pairwise[static_cast<int>(*jp.annotation->preference)][static_cast<int>(jp.judge)];
  }
  out.n_pointwise = static_cast<int>(point.size());
  out.n_pairwise = static_cast<int>(pair.size());
  return out;
}

AgreementReport BuildReport(JudgeVariant variant, std::span<const PointwiseJudgment> pointwise,
                            std::span<const PairwiseJudgment> pairwise,
                            std::span<const HumanAnnotation> annotations,
                            const ModelPair& models) {
  std::vector<PointwiseJudgment> point;
  std::copy_if(pointwise.begin(), pointwise.end(), std::back_inserter(point),
               [&](const PointwiseJudgment& j) { return j.judge_variant == variant; });
  std::vector<PairwiseJudgment> pair;
  std::copy_if(pairwise.begin(), pairwise.end(), std::back_inserter(pair),
               [&](const PairwiseJudgment& j) { return j.judge_variant == variant; });
  const auto context = [&](std::string_view metric, const Error& e) {
    return fmt::format("report {}: {}: {}", ToString(variant), metric, e.what());
  };

  AgreementReport report;
  report.judge_variant = variant;
  ConfusionMatrices cm;
  try {
    cm = ComputeConfusionMatrices(point, pair, annotations, models);
  } catch (const DataError& e) {
    throw DataError(context("confusion matrices", e));
  }
  report.coverage = cm.coverage;
  report.n_pointwise = cm.n_pointwise;
  report.n_pairwise = cm.n_pairwise;
  report.pointwise_confusion = cm.pointwise;

  const auto joined = JoinPointwise(point, annotations);
  std::vector<double> scores;
  std::vector<int> labels;
  std::vector<Verdict> verdicts;
  // std::vector<bool> has no contiguous storage for a span.
  std::unique_ptr<bool[]> flags(new bool[joined.size()]);
  bool any_reported = false;
  for (const auto& jp : joined) {
    const auto human = MapLikertAlignment(*jp.annotation->likert);
    scores.push_back(jp.judgment->confidence);
    labels.push_back(human.label == Verdict::kAligned ? 1 : 0);
    verdicts.push_back(jp.judgment->verdict);
    flags[verdicts.size() - 1] = human.strong_misalignment;
    any_reported = any_reported || jp.judgment->confidence_reported;
    if (human.strong_misalignment) ++report.n_strong_misaligned;
  }
  report.auc_scoring = any_reported ? "confidence" : "binary";
  try {
    report.roc_auc = RocAuc(scores, labels);
  } catch (const Error& e) {
    throw UndefinedMetricError(context("ROC-AUC", e));
  }
  try {
    report.rsm = RecallStrongMisalignment(verdicts, {flags.get(), verdicts.size()});
  } catch (const Error& e) {
    throw UndefinedMetricError(context("RSM", e));
  }
  report.pointwise_accuracy =
      static_cast<double>(cm.pointwise[0][0] + cm.pointwise[1][1]) / report.n_pointwise;

  if (report.n_pairwise > 0) {
    std::vector<Preference> judge;
    std::vector<Preference> human;
    for (const auto& jp : JoinPairwise(pair, annotations, models)) {
      judge.push_back(jp.judge);
      human.push_back(*jp.annotation->preference);
    }
    const auto agreement = ModelSelectionAgreement(judge, human);
    report.msa = agreement.msa;
    report.wins = agreement.wins;
    report.ties = agreement.ties;
    report.losses = agreement.losses;
    report.pairwise_confusion = cm.pairwise;
  }
  return report;
}

json AgreementReport::ToJson() const {
  json j;
  j["judge_variant"] = ToString(judge_variant);
  j["n_pointwise"] = n_pointwise;
  j["n_pairwise"] = n_pairwise;
  j["roc_auc"] = roc_auc;
  j["auc_scoring"] = auc_scoring;
  j["pointwise_accuracy"] = pointwise_accuracy;
  j["rsm"] = rsm;
  j["n_strong_misaligned"] = n_strong_misaligned;
  j["pointwise_confusion"] = {{"rows", "human"},
                              {"columns", "judge"},
                              {"labels", {"aligned", "not_aligned"}},
                              {"counts", MatrixJson(pointwise_confusion)}};
  if (msa) {
    j["msa"] = *msa;
    j["wins"] = wins;
    j["ties"] = ties;
    j["losses"] = losses;
    j["pairwise_confusion"] = {{"rows", "human"},
                               {"columns", "judge"},
                               {"labels", {"model_1", "model_2", "tie"}},
                               {"counts", MatrixJson(*pairwise_confusion)}};
  }
  j["coverage"] = {{"pointwise_unmatched_judgments", coverage.pointwise_unmatched_judgments},
                   {"pointwise_unmatched_annotations", coverage.pointwise_unmatched_annotations},
                   {"pairwise_unmatched_judgments", coverage.pairwise_unmatched_judgments},
                   {"pairwise_unmatched_annotations", coverage.pairwise_unmatched_annotations}};
  return j;
}

AgreementReport AgreementReport::FromJson(const json& j) {
  AgreementReport r;
  r.judge_variant = ParseJudgeVariant(j.at("judge_variant").get<std::string>());
  r.n_pointwise = j.at("n_pointwise").get<int>();
  r.n_pairwise = j.at("n_pairwise").get<int>();
  r.roc_auc = j.at("roc_auc").get<double>();
  r.auc_scoring = j.at("auc_scoring").get<std::string>();
  r.pointwise_accuracy = j.at("pointwise_accuracy").get<double>();
  r.rsm = j.at("rsm").get<double>();
  r.n_strong_misaligned = j.at("n_strong_misaligned").get<int>();
  r.pointwise_confusion = MatrixFromJson<2, 2>(j.at("pointwise_confusion").at("counts"));
  if (j.contains("msa")) {
    r.msa = j.at("msa").get<double>();
    r.wins = j.at("wins").get<int>();
    r.ties = j.at("ties").get<int>();
    r.losses = j.at("losses").get<int>();
    r.pairwise_confusion = MatrixFromJson<3, 3>(j.at("pairwise_confusion").at("counts"));
  }
  const auto& c = j.at("coverage");
  r.coverage = {c.at("pointwise_unmatched_judgments").get<int>(),
                c.at("pointwise_unmatched_annotations").get<int>(),
                c.at("pairwise_unmatched_judgments").get<int>(),
                c.at("pairwise_unmatched_annotations").get<int>()};
  return r;
}

std::string AgreementReport::MsaCell() const {
  if (!msa) return "n/a";
  return fmt::format("{} ({}/{}/{})", Fixed4(*msa), wins, ties, losses);
}

std::string ReportsTable(std::span<const AgreementReport> reports) {
  std::string out = "| Judge | ROC-AUC | MSA (W/T/L) | RSM |\n|---|---|---|---|\n";
  for (const auto& r : reports) {
    out += fmt::format("| {} | {} | {} | {} |\n", ToString(r.judge_variant), Fixed4(r.roc_auc),
                       r.MsaCell(), Fixed4(r.rsm));
  }
  return out;
}

std::string AgreementReport::ToMarkdown() const {
  std::string out = fmt::format("# Agreement report: {}\n\n", ToString(judge_variant));
  out += ReportsTable(std::span<const AgreementReport>(this, 1));
  out += fmt::format(
      "\nPointwise cases: {} (ROC-AUC scoring: {}; accuracy {}; strongly misaligned: {})\n"
      "Pairwise cases: {}\n",
      n_pointwise, auc_scoring, Fixed4(pointwise_accuracy), n_strong_misaligned, n_pairwise);
  out += "\n## Episode level (rows: human, columns: judge)\n\n";
  out += "| | judge aligned | judge not aligned |\n|---|---|---|\n";
  out += fmt::format("| human aligned | {} | {} |\n", pointwise_confusion[0][0],
                     pointwise_confusion[0][1]);
  out += fmt::format("| human not aligned | {} | {} |\n", pointwise_confusion[1][0],
                     pointwise_confusion[1][1]);
  if (pairwise_confusion) {
    const auto& m = *pairwise_confusion;
    out += "\n## Model level (rows: human, columns: judge)\n\n";
    out += "| | judge model_1 | judge model_2 | judge tie |\n|---|---|---|---|\n";
    constexpr std::array<std::string_view, 3> kRows = {"human model_1", "human model_2",
                                                       "human tie"};
    for (std::size_t r = 0; r < 3; ++r) {
      out += fmt::format("| {} | {} | {} | {} |\n", kRows[r], m[r][0], m[r][1], m[r][2]);
    }
  }
  out += fmt::format(
      "\nUnmatched records: pointwise judgments {}, pointwise annotations {}, pairwise "
      "judgments {}, pairwise annotations {}\n",
      coverage.pointwise_unmatched_judgments, coverage.pointwise_unmatched_annotations,
      coverage.pairwise_unmatched_judgments, coverage.pairwise_unmatched_annotations);
  return out;
}

std::string AgreementReport::PointwiseConfusionCsv() const {
  std::string out = "human,judge_aligned,judge_not_aligned\n";
  out += fmt::format("aligned,{},{}\n", pointwise_confusion[0][0], pointwise_confusion[0][1]);
  out += fmt::format("not_aligned,{},{}\n", pointwise_confusion[1][0], pointwise_confusion[1][1]);
  return out;
}

std::string AgreementReport::PairwiseConfusionCsv() const {
  std::string out = "human,judge_model_1,judge_model_2,judge_tie\n";
  if (!pairwise_confusion) return out;
  constexpr std::array<std::string_view, 3> kRows = {"model_1", "model_2", "tie"};
  for (std::size_t r = 0; r < 3; ++r) {
    const auto& row = (*pairwise_confusion)[r];
    out += fmt::format("{},{},{},{}\n", kRows[r], row[0], row[1], row[2]);
  }
  return out;
}

}  // namespace podjudge
