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

// run.toml: every pipeline knob lives here so a run is a diffable artifact.
// Relative paths resolve against the config file's directory.

#ifndef PODJUDGE_CONFIG_H_
#define PODJUDGE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "podjudge/baseline.h"
#include "podjudge/corpus.h"
#include "podjudge/gateway.h"
#include "podjudge/judge.h"
#include "podjudge/metrics.h"
#include "podjudge/profiler.h"

namespace podjudge {

struct RunConfig {
  std::filesystem::path config_dir;
  std::string source_text;  // the TOML as read, recorded in the manifest

  // [run]
  std::uint64_t master_seed = 0;
  Instant as_of{};
  int window_days = kDefaultWindowDays;
  std::vector<JudgeVariant> variants = {JudgeVariant::kLaajProfile, JudgeVariant::kLaajHistory,
                                        JudgeVariant::kSbertSim};
  int parallelism = 4;
  std::filesystem::path out_dir = "runs";

  // [corpus]
  Corpus::Paths corpus;
  std::optional<std::filesystem::path> annotations;
  ModelPair models;

  // [profile]
  std::string profile_template = "profile.v1";
  int n_shows = kDefaultTopShows;
  int episode_budget = kDefaultEpisodeBudget;
  ProfileGenerationOptions profile;

  // [judge]
  std::string pointwise_template = "pointwise.v1";
  std::string pairwise_template = "pairwise.v1";
  // Leading items of each recommendation list that are judged (and shown
  // to annotators).
  int list_depth = 3;
  JudgeOptions judge;

  // [baseline]
  SimilarityJudgmentConfig baseline;

  // [providers]
  std::string generator = "mock:topic-overlap";  // mock:<policy> | http
  std::optional<std::filesystem::path> scripted_responses;
  std::string embedder = "hash";                 // hash | http
  std::size_t embedding_dimension = HashEmbedder::kDefaultDimension;
  std::uint64_t embedding_seed = HashEmbedder::kDefaultSeed;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> prompts_dir;
  int retries = 3;
  int backoff_ms = 1000;
  int max_in_flight = 4;

  // [ablation]
  std::vector<int> ablation_budgets = {5, 10, 15, 20};

  // [serve]
  std::string listen = "127.0.0.1:8080";
  std::optional<std::filesystem::path> static_dir;
  std::optional<std::filesystem::path> annotation_log;
  std::optional<std::filesystem::path> export_dir;

  bool HasVariant(JudgeVariant v) const;
};

// ConfigError for unreadable files, TOML syntax errors, unknown keys or
// sections, wrong types, and out-of-range values.
RunConfig LoadConfig(const std::filesystem::path& path);
RunConfig ParseConfig(std::string_view toml_text, const std::filesystem::path& config_dir);

}  // namespace podjudge

#endif  // PODJUDGE_CONFIG_H_
