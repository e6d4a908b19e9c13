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

#include "podjudge/config.h"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

#include "podjudge/errors.h"
#include "podjudge/mock_provider.h"

namespace podjudge {

namespace {

// Reads one table and rejects keys nobody asked for.
class Section {
 public:
  Section(const toml::table& root, std::string name) : name_(std::move(name)) {
    const toml::node* node = root.get(name_);
    if (node == nullptr) return;
    table_ = node->as_table();
    if (table_ == nullptr) throw ConfigError(fmt::format("[{}] must be a table", name_));
  }

  template <typename T>
  std::optional<T> Get(const char* key) {
    seen_.insert(key);
    if (table_ == nullptr) return std::nullopt;
    const toml::node* node = table_->get(key);
    if (node == nullptr) return std::nullopt;
    if constexpr (std::is_same_v<T, std::string>) {
      if (const auto v = node->value_exact<std::string>()) return *v;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (const auto v = node->value_exact<bool>()) return *v;
    } else if constexpr (std::is_same_v<T, double>) {
      if (const auto v = node->value<double>()) return *v;
    } else {
      if (const auto v = node->value_exact<std::int64_t>()) return *v;
    }
    throw ConfigError(fmt::format("{}.{} has the wrong type", name_, key));
  }

  std::optional<std::int64_t> Int(const char* key, std::int64_t lo, std::int64_t hi) {
    const auto v = Get<std::int64_t>(key);
    if (v && (*v < lo || *v > hi)) {
      throw ConfigError(fmt::format("{}.{} = {} outside [{}, {}]", name_, key, *v, lo, hi));
    }
    return v;
  }

  const toml::array* Array(const char* key) {
    seen_.insert(key);
    if (table_ == nullptr) return nullptr;
    const toml::node* node = table_->get(key);
    if (node == nullptr) return nullptr;
    if (!node->is_array()) throw ConfigError(fmt::format("{}.{} must be an array", name_, key));
    return node->as_array();
  }

  void RejectUnknown() const {
    if (table_ == nullptr) return;
    for (const auto& [key, value] : *table_) {
      if (seen_.count(std::string(key.str())) == 0) {
        throw ConfigError(fmt::format("unknown key {}.{}", name_, key.str()));
      }
    }
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  const toml::table* table_ = nullptr;
  std::set<std::string, std::less<>> seen_;
};

std::filesystem::path Resolve(const std::filesystem::path& dir, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : dir / path;
}

}  // namespace

bool RunConfig::HasVariant(JudgeVariant v) const {
  return std::find(variants.begin(), variants.end(), v) != variants.end();
}

RunConfig ParseConfig(std::string_view toml_text, const std::filesystem::path& config_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e;
    throw ConfigError(fmt::format("config syntax error: {}", msg.str()));
  }
  static const std::set<std::string, std::less<>> kSections = {
      "run", "corpus", "profile", "judge", "baseline", "providers", "ablation", "serve"};
  for (const auto& [key, value] : root) {
    if (kSections.count(key.str()) == 0) {
      throw ConfigError(fmt::format("unknown config section [{}]", key.str()));
    }
  }

  RunConfig c;
  c.config_dir = config_dir;
  c.source_text = std::string(toml_text);
  const auto path = [&](const std::optional<std::string>& p) {
    return p ? std::optional<std::filesystem::path>(Resolve(config_dir, *p)) : std::nullopt;
  };

  Section run(root, "run");
  if (const auto v = run.Int("master_seed", 0, std::numeric_limits<std::int64_t>::max())) {
    c.master_seed = static_cast<std::uint64_t>(*v);
  }
  const auto as_of = run.Get<std::string>("as_of");
  if (!as_of) throw ConfigError("run.as_of is required (RFC 3339 instant ending the window)");
  try {
    c.as_of = ParseRfc3339(*as_of);
  } catch (const DataError& e) {
    throw ConfigError(fmt::format("run.as_of: {}", e.what()));
  }
  if (const auto v = run.Int("window_days", 1, 36500)) c.window_days = static_cast<int>(*v);
  if (const auto* arr = run.Array("variants")) {
    c.variants.clear();
    for (const auto& node : *arr) {
      const auto name = node.value_exact<std::string>();
      if (!name) throw ConfigError("run.variants must hold strings");
      JudgeVariant v;
      try {
        v = ParseJudgeVariant(*name);
      } catch (const Error&) {
        throw ConfigError(fmt::format(
            "unknown judge variant '{}' (expected laaj_profile, laaj_history, sbert_sim)", *name));
      }
      if (!c.HasVariant(v)) c.variants.push_back(v);
    }
    if (c.variants.empty()) throw ConfigError("run.variants is empty");
  }
  if (const auto v = run.Int("parallelism", 1, 1024)) c.parallelism = static_cast<int>(*v);
  if (const auto v = run.Get<std::string>("out_dir")) c.out_dir = Resolve(config_dir, *v);
  else c.out_dir = config_dir / c.out_dir;
  run.RejectUnknown();

  Section corpus(root, "corpus");
  const auto required = [&](Section& s, const char* key) {
    const auto v = s.Get<std::string>(key);
    if (!v) throw ConfigError(fmt::format("{}.{} is required", s.name(), key));
    return Resolve(config_dir, *v);
  };
  c.corpus.shows = required(corpus, "shows");
  c.corpus.episodes = required(corpus, "episodes");
  c.corpus.events = required(corpus, "events");
  c.corpus.recommendations = path(corpus.Get<std::string>("recommendations"));
  c.annotations = path(corpus.Get<std::string>("annotations"));
  const auto m1 = corpus.Get<std::string>("model_1");
  const auto m2 = corpus.Get<std::string>("model_2");
  if (m1 || m2) {
    if (!m1 || !m2 || m1->empty() || *m1 == *m2) {
      throw ConfigError("corpus.model_1 and corpus.model_2 must be two distinct model ids");
    }
    c.models = {*m1, *m2};
  }
  corpus.RejectUnknown();

  Section profile(root, "profile");
  if (const auto v = profile.Get<std::string>("template")) c.profile_template = *v;
  if (const auto v = profile.Int("n_shows", 1, 1000)) c.n_shows = static_cast<int>(*v);
  if (const auto v = profile.Int("episode_budget", 1, 1000)) c.episode_budget = static_cast<int>(*v);
  if (const auto v = profile.Get<std::string>("model_id")) c.profile.model_id = *v;
  if (const auto v = profile.Get<double>("temperature")) c.profile.temperature = *v;
  if (const auto v = profile.Int("max_output_tokens", 1, 1000000)) {
    c.profile.max_output_tokens = static_cast<int>(*v);
  }
  if (const auto v = profile.Int("description_budget", 1, 100000)) {
    c.profile.prompt.description_budget = static_cast<std::size_t>(*v);
  }
  if (const auto v = profile.Int("transcript_budget", 0, 100000)) {
    c.profile.prompt.transcript_budget = static_cast<std::size_t>(*v);
  }
  if (const auto v = profile.Int("prompt_char_cap", 1000, 10000000)) {
    c.profile.prompt.prompt_char_cap = static_cast<std::size_t>(*v);
  }
  profile.RejectUnknown();
  c.profile.generated_at = c.as_of;

  Section judge(root, "judge");
  if (const auto v = judge.Get<std::string>("pointwise_template")) c.pointwise_template = *v;
  if (const auto v = judge.Get<std::string>("pairwise_template")) c.pairwise_template = *v;
  if (const auto v = judge.Int("list_depth", 1, 1000)) c.list_depth = static_cast<int>(*v);
  if (const auto v = judge.Get<std::string>("model_id")) c.judge.model_id = *v;
  if (const auto v = judge.Get<double>("temperature")) c.judge.temperature = *v;
  if (const auto v = judge.Int("max_output_tokens", 1, 1000000)) {
    c.judge.max_output_tokens = static_cast<int>(*v);
  }
  if (const auto v = judge.Int("history_cap", 1, 100000)) {
    c.judge.history_cap = static_cast<std::size_t>(*v);
  }
  if (const auto v = judge.Int("description_budget", 1, 100000)) {
    c.judge.description_budget = static_cast<std::size_t>(*v);
  }
  if (const auto v = judge.Int("transcript_budget", 0, 100000)) {
    c.judge.transcript_budget = static_cast<std::size_t>(*v);
  }
  judge.RejectUnknown();

  Section baseline(root, "baseline");
  if (const auto v = baseline.Get<double>("threshold")) c.baseline.threshold = *v;
  if (const auto v = baseline.Get<double>("tie_epsilon")) c.baseline.tie_epsilon = *v;
  if (const auto v = baseline.Get<std::string>("embedding_model_id")) {
    c.baseline.embedding_model_id = *v;
  }
  if (const auto v = baseline.Get<bool>("include_transcript")) c.baseline.include_transcript = *v;
  baseline.RejectUnknown();
  try {
    c.baseline.Validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(fmt::format("[baseline]: {}", e.what()));
  }

  Section providers(root, "providers");
  if (const auto v = providers.Get<std::string>("generator")) c.generator = *v;
  if (c.generator.rfind("mock:", 0) == 0) {
    try {
      ParseMockPolicy(c.generator.substr(5));
    } catch (const Error& e) {
      throw ConfigError(fmt::format("providers.generator: {}", e.what()));
    }
  } else if (c.generator != "http") {
    throw ConfigError(
        fmt::format("providers.generator '{}' is not mock:<policy> or http", c.generator));
  }
  c.scripted_responses = path(providers.Get<std::string>("scripted_responses"));
  if (c.generator == "mock:scripted" && !c.scripted_responses) {
    throw ConfigError("mock:scripted needs providers.scripted_responses");
  }
  if (const auto v = providers.Get<std::string>("embedder")) c.embedder = *v;
  if (c.embedder != "hash" && c.embedder != "http") {
    throw ConfigError(fmt::format("providers.embedder '{}' is not hash or http", c.embedder));
  }
  if (const auto v = providers.Int("embedding_dimension", 1, 1 << 20)) {
    c.embedding_dimension = static_cast<std::size_t>(*v);
  }
  if (const auto v = providers.Int("embedding_seed", 0, std::numeric_limits<std::int64_t>::max())) {
    c.embedding_seed = static_cast<std::uint64_t>(*v);
  }
  c.cache_dir = path(providers.Get<std::string>("cache_dir"));
  c.prompts_dir = path(providers.Get<std::string>("prompts_dir"));
  if (const auto v = providers.Int("retries", 1, 100)) c.retries = static_cast<int>(*v);
  if (const auto v = providers.Int("backoff_ms", 0, 600000)) c.backoff_ms = static_cast<int>(*v);
  if (const auto v = providers.Int("max_in_flight", 1, 1024)) c.max_in_flight = static_cast<int>(*v);
  providers.RejectUnknown();

  Section ablation(root, "ablation");
  if (const auto* arr = ablation.Array("budgets")) {
    c.ablation_budgets.clear();
    for (const auto& node : *arr) {
      const auto v = node.value_exact<std::int64_t>();
      if (!v || *v < 1 || *v > 1000) throw ConfigError("ablation.budgets must be integers in 1..1000");
      c.ablation_budgets.push_back(static_cast<int>(*v));
    }
    if (c.ablation_budgets.empty()) throw ConfigError("ablation.budgets is empty");
  }
  ablation.RejectUnknown();

  Section serve(root, "serve");
  if (const auto v = serve.Get<std::string>("listen")) c.listen = *v;
  c.static_dir = path(serve.Get<std::string>("static_dir"));
  c.annotation_log = path(serve.Get<std::string>("annotation_log"));
  c.export_dir = path(serve.Get<std::string>("export_dir"));
  serve.RejectUnknown();

  return c;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const Error& e) {
    throw ConfigError(fmt::format("cannot read config '{}': {}", path.string(), e.what()));
  }
  auto dir = path.parent_path();
  if (dir.empty()) dir = ".";
  return ParseConfig(text, dir);
}

}  // namespace podjudge
