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

// End-to-end orchestration. Each stage reads what earlier stages left in the
// run directory when it has not produced it in this process, so stage
// subcommands can run one at a time against the same directory.

#ifndef PODJUDGE_PIPELINE_H_
#define PODJUDGE_PIPELINE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "podjudge/config.h"
#include "podjudge/corpus.h"
#include "podjudge/gateway.h"
#include "podjudge/judge.h"
#include "podjudge/metrics.h"
#include "podjudge/profiler.h"
#include "podjudge/prompts.h"

namespace podjudge {

// Artifact names inside a run directory.
namespace artifacts {
inline constexpr std::string_view kIngestReport = "ingest_report.json";
inline constexpr std::string_view kRejects = "ingest.rejects.log";
inline constexpr std::string_view kProfiles = "profiles.jsonl";
inline constexpr std::string_view kPointwise = "pointwise_judgments.jsonl";
inline constexpr std::string_view kPairwise = "pairwise_judgments.jsonl";
inline constexpr std::string_view kReportsTable = "reports.md";
inline constexpr std::string_view kAblationCsv = "ablation.csv";
inline constexpr std::string_view kAblationMd = "ablation.md";
inline constexpr std::string_view kManifest = "manifest.json";
inline constexpr std::string_view kAnnotations = "annotations.jsonl";
}  // namespace artifacts

struct Providers {
  std::shared_ptr<TextProvider> text;
  std::shared_ptr<EmbeddingProvider> embedder;
};

// Builds the providers named in [providers]. ConfigError for HTTP providers
// whose environment variables are unset.
Providers MakeProviders(const RunConfig& config);

struct AblationRow {
  int episode_budget = 0;
  int n_pointwise = 0;
  double accuracy = 0.0;
};

std::string AblationCsv(const std::vector<AblationRow>& rows);
std::string AblationMarkdown(const std::vector<AblationRow>& rows);

class Pipeline {
 public:
  Pipeline(RunConfig config, std::filesystem::path run_dir);
  Pipeline(RunConfig config, std::filesystem::path run_dir, Providers providers);

  const RunConfig& config() const { return config_; }
  const std::filesystem::path& run_dir() const { return run_dir_; }
  Gateway& gateway() { return *gateway_; }

  // Ingests on first use.
  const Corpus& corpus();
  // The study pair: configured, or the two recommendation models sorted.
  const ModelPair& models();

  IngestReport Ingest();
  std::vector<UserProfile> Profile();
  // LLM variants enabled in the config.
  void Judge();
  // sbert_sim, when enabled.
  void Baseline();
  std::vector<AgreementReport> Report();
  std::vector<AblationRow> Ablate();
  std::vector<AblationRow> Ablate(const std::vector<int>& budgets);
  // Every stage in order, then the manifest.
  void Run();
  nlohmann::json WriteManifest();

  const std::vector<std::string>& skipped_users() const { return skipped_users_; }

 private:
  std::filesystem::path Artifact(std::string_view name) const { return run_dir_ / name; }
  const std::vector<UserProfile>& profiles();
  std::vector<HumanAnnotation> LoadAnnotations() const;
  PromptTemplate Template(const std::string& version);
  // Study lists for the user, truncated to list_depth; null when missing.
  std::optional<RecommendationList> StudyList(const std::string& user_id,
                                              const std::string& model_id);
  std::vector<std::string> Candidates(const std::string& user_id);
  std::vector<UserProfile> GenerateProfiles(int episode_budget, bool record_skips);
  std::vector<PointwiseJudgment> JudgePointwiseFor(JudgeVariant variant,
                                                   const std::vector<UserProfile>& profiles);
  std::vector<PairwiseJudgment> JudgePairwiseFor(JudgeVariant variant);
  void MergeJudgments(const std::vector<JudgeVariant>& variants,
                      std::vector<PointwiseJudgment> pointwise,
                      std::vector<PairwiseJudgment> pairwise);

  RunConfig config_;
  std::filesystem::path run_dir_;
  Providers providers_;
  std::unique_ptr<Gateway> gateway_;
  std::optional<Corpus> corpus_;
  std::optional<ModelPair> models_;
  std::optional<std::vector<UserProfile>> profiles_;
  std::map<std::string, PromptTemplate> templates_;
  std::vector<std::string> skipped_users_;
  std::vector<std::string> stages_run_;
};

// Runs `fn`, prefixing any library error with "<stage>: " while keeping its
// category (and so its exit code).
template <typename Fn>
auto RunStage(std::string_view stage, Fn&& fn) -> decltype(fn());

// Process exit code for an exception: 2 config, 3 data, 4 provider or
// transport, 1 anything else.
int ExitCodeFor(const std::exception& e);

}  // namespace podjudge

#include "podjudge/pipeline_inl.h"

#endif  // PODJUDGE_PIPELINE_H_
