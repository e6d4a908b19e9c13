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

#include "podjudge/pipeline.h"

#include <algorithm>
#include <exception>
#include <set>

#include <fmt/format.h>

#include "podjudge/baseline.h"
#include "podjudge/errors.h"
#include "podjudge/jsonl.h"
#include "podjudge/mock_provider.h"

namespace podjudge {

using nlohmann::json;

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` threads. The first failure
// by index is rethrown once every iteration has finished.
template <typename Fn>
void ParallelFor(int n, int threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void WriteText(const std::filesystem::path& path, std::string_view text) {
  WriteFileAtomic(path, text);
}

json CountsJson(const FileCounts& c) {
  return {{"lines", c.lines}, {"accepted", c.accepted}, {"rejected", c.rejected}};
}

json StatsJson(const GatewayStats& s) {
  return {{"generate_calls", s.generate_calls},   {"generate_cache_hits", s.generate_cache_hits},
          {"embed_calls", s.embed_calls},         {"embed_cache_hits", s.embed_cache_hits},
          {"provider_calls", s.provider_calls},   {"retries", s.retries}};
}

bool PointwiseLess(const PointwiseJudgment& a, const PointwiseJudgment& b) {
  return std::tie(a.judge_variant, a.user_id, a.episode_id) <
         std::tie(b.judge_variant, b.user_id, b.episode_id);
}

bool PairwiseLess(const PairwiseJudgment& a, const PairwiseJudgment& b) {
  return std::tie(a.judge_variant, a.user_id) < std::tie(b.judge_variant, b.user_id);
}

template <typename T>
std::vector<T> ReadIfExists(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  return ReadJsonl<T>(path);
}

}  // namespace

Providers MakeProviders(const RunConfig& config) {
  Providers p;
  if (config.generator == "http") {
    p.text = HttpChatProvider::FromEnvironment();
  } else {
    const auto policy = ParseMockPolicy(config.generator.substr(5));
    if (policy == MockPolicy::kScripted) {
      p.text = std::make_shared<MockJudgeProvider>(
          MockJudgeProvider::FromScriptFile(*config.scripted_responses));
    } else {
      p.text = std::make_shared<MockJudgeProvider>(policy);
    }
  }
  if (config.embedder == "http") {
    p.embedder = HttpEmbeddingProvider::FromEnvironment();
  } else {
    p.embedder = std::make_shared<HashEmbedder>(config.embedding_dimension, config.embedding_seed);
  }
  return p;
}

std::string AblationCsv(const std::vector<AblationRow>& rows) {
  std::string out = "episode_budget,n_pointwise,accuracy\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{:.4f}\n", r.episode_budget, r.n_pointwise, r.accuracy);
  }
  return out;
}

std::string AblationMarkdown(const std::vector<AblationRow>& rows) {
  std::string out =
      "# Profile length ablation (laaj_profile)\n\n"
      "| Episode budget | Pointwise cases | Accuracy vs human |\n|---|---|---|\n";
  for (const auto& r : rows) {
    out += fmt::format("| {} | {} | {:.4f} |\n", r.episode_budget, r.n_pointwise, r.accuracy);
  }
  return out;
}

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) return 2;
  if (dynamic_cast<const DataError*>(&e) != nullptr) return 3;
  if (dynamic_cast<const ProviderError*>(&e) != nullptr) return 4;
  if (dynamic_cast<const TransportError*>(&e) != nullptr) return 4;
  return 1;
}

Pipeline::Pipeline(RunConfig config, std::filesystem::path run_dir)
    : Pipeline(config, std::move(run_dir), MakeProviders(config)) {}

Pipeline::Pipeline(RunConfig config, std::filesystem::path run_dir, Providers providers)
    : config_(std::move(config)), run_dir_(std::move(run_dir)), providers_(std::move(providers)) {
  Gateway::Options options;
  options.retry.attempts = config_.retries;
  options.retry.initial_backoff = std::chrono::milliseconds(config_.backoff_ms);
  options.max_in_flight = config_.max_in_flight;
  gateway_ = std::make_unique<Gateway>(
      providers_.text, providers_.embedder,
      config_.cache_dir ? ResponseCache(*config_.cache_dir) : ResponseCache(), options);
  std::filesystem::create_directories(run_dir_);
}

const Corpus& Pipeline::corpus() {
  if (!corpus_) corpus_ = Corpus::Ingest(config_.corpus);
  return *corpus_;
}

const ModelPair& Pipeline::models() {
  if (models_) return *models_;
  if (!config_.models.model_1.empty()) {
    models_ = config_.models;
    return *models_;
  }
  std::set<std::string> ids;
  for (const auto& r : corpus().recommendations()) ids.insert(r.model_id);
  if (ids.size() != 2) {
    throw ConfigError(fmt::format(
        "recommendations hold {} model ids; set corpus.model_1 and corpus.model_2", ids.size()));
  }
  models_ = ModelPair{*ids.begin(), *std::next(ids.begin())};
  return *models_;
}

PromptTemplate Pipeline::Template(const std::string& version) {
  const auto it = templates_.find(version);
  if (it != templates_.end()) return it->second;
  auto tmpl = LoadTemplate(version, config_.prompts_dir);
  templates_.emplace(version, tmpl);
  return tmpl;
}

IngestReport Pipeline::Ingest() {
  return RunStage("ingest", [&] {
    const auto& report = corpus().report();
    json j = {{"shows", CountsJson(report.shows)},
              {"episodes", CountsJson(report.episodes)},
              {"events", CountsJson(report.events)},
              {"recommendations", CountsJson(report.recommendations)},
              {"rejected_total", report.rejects.size()}};
    WriteText(Artifact(artifacts::kIngestReport), j.dump(2) + "\n");
    WriteText(Artifact(artifacts::kRejects), report.RejectLog());
    stages_run_.push_back("ingest");
    return report;
  });
}

std::vector<UserProfile> Pipeline::GenerateProfiles(int episode_budget, bool record_skips) {
  const auto& c = corpus();
  const auto users = c.Users();
  const auto tmpl = Template(config_.profile_template);
  std::vector<std::optional<UserProfile>> slots(users.size());
  std::vector<char> skipped(users.size(), 0);
  ParallelFor(static_cast<int>(users.size()), config_.parallelism, [&](int i) {
    const auto& user = users[static_cast<std::size_t>(i)];
    const auto history = WindowHistory(c, user, config_.as_of, config_.window_days);
    ProfileInput input;
    try {
      input = SelectProfileInput(history, c, config_.n_shows, episode_budget);
    } catch (const InsufficientHistoryError&) {
      skipped[static_cast<std::size_t>(i)] = 1;
      return;
    }
    slots[static_cast<std::size_t>(i)] = GenerateProfile(input, *gateway_, tmpl, config_.profile);
  });
  std::vector<UserProfile> out;
  if (record_skips) skipped_users_.clear();
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (slots[i]) out.push_back(std::move(*slots[i]));
    if (skipped[i] && record_skips) skipped_users_.push_back(users[i]);
  }
  return out;
}

std::vector<UserProfile> Pipeline::Profile() {
  return RunStage("profile", [&] {
    profiles_ = GenerateProfiles(config_.episode_budget, true);
    WriteJsonl(Artifact(artifacts::kProfiles), *profiles_);
    stages_run_.push_back("profile");
    return *profiles_;
  });
}

const std::vector<UserProfile>& Pipeline::profiles() {
  if (!profiles_) {
    const auto path = Artifact(artifacts::kProfiles);
    if (!std::filesystem::exists(path)) {
      throw DataError(fmt::format("'{}' is missing; run the profile stage first", path.string()));
    }
    profiles_ = ReadJsonl<UserProfile>(path);
  }
  return *profiles_;
}

std::optional<RecommendationList> Pipeline::StudyList(const std::string& user_id,
                                                      const std::string& model_id) {
  const auto* list = corpus().FindRecommendation(user_id, model_id);
  if (list == nullptr) return std::nullopt;
  RecommendationList out = *list;
  if (out.episodes.size() > static_cast<std::size_t>(config_.list_depth)) {
    out.episodes.resize(static_cast<std::size_t>(config_.list_depth));
  }
  return out;
}

std::vector<std::string> Pipeline::Candidates(const std::string& user_id) {
  std::vector<std::string> out;
  for (const auto& model : {models().model_1, models().model_2}) {
    const auto list = StudyList(user_id, model);
    if (!list) continue;
    for (const auto& e : list->episodes) {
      if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointwiseJudgment> Pipeline::JudgePointwiseFor(
    JudgeVariant variant, const std::vector<UserProfile>& profiles) {
  const auto& c = corpus();
  models();
  std::vector<std::vector<std::string>> candidates(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) candidates[i] = Candidates(profiles[i].user_id);

  if (variant == JudgeVariant::kSbertSim) {
    std::vector<UserEpisode> pairs;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      for (const auto& e : candidates[i]) pairs.push_back({profiles[i].user_id, e});
    }
    return SimPointwiseBatch(profiles, pairs, c, config_.baseline, *gateway_);
  }

  const auto tmpl = Template(config_.pointwise_template);
  std::vector<std::vector<PointwiseJudgment>> per_user(profiles.size());
  ParallelFor(static_cast<int>(profiles.size()), config_.parallelism, [&](int i) {
    const auto& profile = profiles[static_cast<std::size_t>(i)];
    const JudgeContext ctx =
        variant == JudgeVariant::kLaajProfile
            ? JudgeContext::FromProfile(profile)
            : JudgeContext::FromHistory(
                  WindowHistory(c, profile.user_id, config_.as_of, config_.window_days), c);
    for (const auto& id : candidates[static_cast<std::size_t>(i)]) {
      const Episode* e = c.FindEpisode(id);
      const Show* show = c.FindShow(e->show_id);
      per_user[static_cast<std::size_t>(i)].push_back(JudgePointwise(
          ctx, *e, show != nullptr ? show->title : e->show_id, *gateway_, tmpl, config_.judge));
    }
  });
  std::vector<PointwiseJudgment> out;
  for (auto& v : per_user) {
    for (auto& j : v) out.push_back(std::move(j));
  }
  return out;
}

std::vector<PairwiseJudgment> Pipeline::JudgePairwiseFor(JudgeVariant variant) {
  const auto& c = corpus();
  const auto pair = models();
  const auto& ps = profiles();
  std::vector<std::optional<PairwiseJudgment>> slots(ps.size());
  const auto tmpl = variant == JudgeVariant::kSbertSim
                        ? std::optional<PromptTemplate>()
                        : std::optional<PromptTemplate>(Template(config_.pairwise_template));
  ParallelFor(static_cast<int>(ps.size()), config_.parallelism, [&](int i) {
    const auto& profile = ps[static_cast<std::size_t>(i)];
    const auto list_1 = StudyList(profile.user_id, pair.model_1);
    const auto list_2 = StudyList(profile.user_id, pair.model_2);
    if (!list_1 || !list_2) return;
    if (variant == JudgeVariant::kSbertSim) {
      slots[static_cast<std::size_t>(i)] =
          SimPairwise(profile, *list_1, *list_2, c, config_.baseline, *gateway_);
      return;
    }
    const JudgeContext ctx =
        variant == JudgeVariant::kLaajProfile
            ? JudgeContext::FromProfile(profile)
            : JudgeContext::FromHistory(
                  WindowHistory(c, profile.user_id, config_.as_of, config_.window_days), c);
    const auto seed =
        DeriveEvaluationSeed(config_.master_seed, profile.user_id, pair.model_1, pair.model_2);
    slots[static_cast<std::size_t>(i)] =
        JudgePairwise(ctx, *list_1, *list_2, c, *gateway_, seed, *tmpl, config_.judge);
  });
  std::vector<PairwiseJudgment> out;
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  return out;
}

void Pipeline::MergeJudgments(const std::vector<JudgeVariant>& variants,
                              std::vector<PointwiseJudgment> pointwise,
                              std::vector<PairwiseJudgment> pairwise) {
  const auto replaced = [&](JudgeVariant v) {
    return std::find(variants.begin(), variants.end(), v) != variants.end();
  };
  for (auto& j : ReadIfExists<PointwiseJudgment>(Artifact(artifacts::kPointwise))) {
    if (!replaced(j.judge_variant)) pointwise.push_back(std::move(j));
  }
  for (auto& j : ReadIfExists<PairwiseJudgment>(Artifact(artifacts::kPairwise))) {
    if (!replaced(j.judge_variant)) pairwise.push_back(std::move(j));
  }
  std::stable_sort(pointwise.begin(), pointwise.end(), PointwiseLess);
  std::stable_sort(pairwise.begin(), pairwise.end(), PairwiseLess);
  WriteJsonl(Artifact(artifacts::kPointwise), pointwise);
  WriteJsonl(Artifact(artifacts::kPairwise), pairwise);
}

void Pipeline::Judge() {
  RunStage("judge", [&] {
    std::vector<JudgeVariant> variants;
    std::vector<PointwiseJudgment> pointwise;
    std::vector<PairwiseJudgment> pairwise;
    for (const auto v : {JudgeVariant::kLaajProfile, JudgeVariant::kLaajHistory}) {
      if (!config_.HasVariant(v)) continue;
      variants.push_back(v);
      for (auto& j : JudgePointwiseFor(v, profiles())) pointwise.push_back(std::move(j));
      for (auto& j : JudgePairwiseFor(v)) pairwise.push_back(std::move(j));
    }
    MergeJudgments(variants, std::move(pointwise), std::move(pairwise));
    stages_run_.push_back("judge");
  });
}

void Pipeline::Baseline() {
  RunStage("baseline", [&] {
    if (!config_.HasVariant(JudgeVariant::kSbertSim)) return;
    MergeJudgments({JudgeVariant::kSbertSim},
                   JudgePointwiseFor(JudgeVariant::kSbertSim, profiles()),
                   JudgePairwiseFor(JudgeVariant::kSbertSim));
    stages_run_.push_back("baseline");
  });
}

std::vector<HumanAnnotation> Pipeline::LoadAnnotations() const {
  if (!config_.annotations) {
    throw ConfigError("corpus.annotations is required for reports and ablation");
  }
  return ReadJsonl<HumanAnnotation>(*config_.annotations);
}

std::vector<AgreementReport> Pipeline::Report() {
  return RunStage("report", [&] {
    const auto annotations = LoadAnnotations();
    const auto pointwise = ReadIfExists<PointwiseJudgment>(Artifact(artifacts::kPointwise));
    const auto pairwise = ReadIfExists<PairwiseJudgment>(Artifact(artifacts::kPairwise));
    std::vector<AgreementReport> reports;
    for (const auto v : config_.variants) {
      auto report = BuildReport(v, pointwise, pairwise, annotations, models());
      const auto name = ToString(v);
      WriteText(Artifact(fmt::format("report.{}.json", name)), report.ToJson().dump(2) + "\n");
      WriteText(Artifact(fmt::format("report.{}.md", name)), report.ToMarkdown());
      WriteText(Artifact(fmt::format("confusion.{}.pointwise.csv", name)),
                report.PointwiseConfusionCsv());
      WriteText(Artifact(fmt::format("confusion.{}.pairwise.csv", name)),
                report.PairwiseConfusionCsv());
      reports.push_back(std::move(report));
    }
    WriteText(Artifact(artifacts::kReportsTable),
              fmt::format("# Judge agreement with human annotations\n\nModels: model_1 = {}, "
                          "model_2 = {}\n\n{}",
                          models().model_1, models().model_2, ReportsTable(reports)));
    stages_run_.push_back("report");
    return reports;
  });
}

std::vector<AblationRow> Pipeline::Ablate() { return Ablate(config_.ablation_budgets); }

std::vector<AblationRow> Pipeline::Ablate(const std::vector<int>& budgets) {
  return RunStage("ablate", [&] {
    if (budgets.empty()) throw ArgumentError("no ablation budgets");
    const auto annotations = LoadAnnotations();
    const auto dir = run_dir_ / "ablation";
    std::filesystem::create_directories(dir);
    std::vector<AblationRow> rows;
    for (const int k : budgets) {
      if (k < 1) throw ArgumentError(fmt::format("episode budget {} < 1", k));
      const auto ps = GenerateProfiles(k, false);
      const auto judgments = JudgePointwiseFor(JudgeVariant::kLaajProfile, ps);
      WriteJsonl(dir / fmt::format("profiles.k{}.jsonl", k), ps);
      WriteJsonl(dir / fmt::format("pointwise.k{}.jsonl", k), judgments);
      const auto cm = ComputeConfusionMatrices(judgments, {}, annotations, models());
      if (cm.n_pointwise == 0) {
        throw DataError(fmt::format("budget {}: no judgments match a human label", k));
      }
      rows.push_back({k, cm.n_pointwise,
                      static_cast<double>(cm.pointwise[0][0] + cm.pointwise[1][1]) /
                          cm.n_pointwise});
    }
    WriteText(Artifact(artifacts::kAblationCsv), AblationCsv(rows));
    WriteText(Artifact(artifacts::kAblationMd), AblationMarkdown(rows));
    stages_run_.push_back("ablate");
    return rows;
  });
}

void Pipeline::Run() {
  Ingest();
  Profile();
  if (config_.HasVariant(JudgeVariant::kLaajProfile) ||
      config_.HasVariant(JudgeVariant::kLaajHistory)) {
    Judge();
  }
  Baseline();
  if (config_.annotations) Report();
  WriteManifest();
}

json Pipeline::WriteManifest() {
  return RunStage("manifest", [&] {
    json templates = json::object();
    for (const auto& [version, tmpl] : templates_) templates[version] = Sha256Hex(tmpl.text());
    json variants = json::array();
    for (const auto v : config_.variants) variants.push_back(ToString(v));
    json seeds = json::object();
    if (profiles_) {
      for (const auto& p : *profiles_) {
        seeds[p.user_id] =
            DeriveEvaluationSeed(config_.master_seed, p.user_id, models().model_1,
                                 models().model_2);
      }
    }
    json files = json::object();
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(run_dir_)) {
      if (entry.is_regular_file() && entry.path().filename() != artifacts::kManifest) {
        paths.push_back(entry.path());
      }
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) {
      files[std::filesystem::relative(p, run_dir_).generic_string()] = Sha256Hex(ReadFile(p));
    }
    json manifest = {
        {"master_seed", config_.master_seed},
        {"as_of", FormatRfc3339(config_.as_of)},
        {"window_days", config_.window_days},
        {"variants", variants},
        {"models", {{"model_1", models().model_1}, {"model_2", models().model_2}}},
        {"templates", templates},
        {"providers",
         {{"text", gateway_->text_provider_name()},
          {"embedder", gateway_->embedding_provider_name()},
          {"judge_model_id", config_.judge.model_id},
          {"profile_model_id", config_.profile.model_id},
          {"embedding_model_id", config_.baseline.embedding_model_id}}},
        {"cache", StatsJson(gateway_->stats())},
        {"pairwise_seeds", seeds},
        {"skipped_users", skipped_users_},
        {"stages", stages_run_},
        {"config", config_.source_text},
        {"artifacts", files},
    };
    WriteText(Artifact(artifacts::kManifest), manifest.dump(2) + "\n");
    return manifest;
  });
}

}  // namespace podjudge
