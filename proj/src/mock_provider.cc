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

#include "podjudge/mock_provider.h"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "json.hpp"
#include "podjudge/errors.h"
#include "podjudge/profiler.h"
#include "podjudge/prompts.h"
#include "podjudge/util.h"

namespace podjudge {
namespace {

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    out.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

bool Contains(std::string_view text, std::string_view needle) {
  return text.find(needle) != std::string_view::npos;
}

std::string SynthesizeProfile(std::string_view prompt) {
  const auto block =
      ExtractBlock(prompt, markers::kTopEpisodes, markers::kSummaryEnd).value_or("");
  std::vector<std::string> topics;
  for (const auto& tag : TagsInBlock(block)) {
    const bool dup = std::any_of(topics.begin(), topics.end(), [&](const std::string& t) {
      return ToLower(t) == ToLower(tag);
    });
    if (!dup) topics.push_back(tag);
  }
  int episodes = 0;
  std::int64_t listened = 0;
  std::int64_t duration = 0;
  for (auto line : Lines(block)) {
    long long l = 0, d = 0;
    const auto at = line.find("| listened ");
    if (at == std::string_view::npos) continue;
    if (std::sscanf(std::string(line.substr(at)).c_str(), "| listened %lld s of %lld s", &l,
                    &d) == 2) {
      ++episodes;
      listened += l;
      duration += d;
    }
  }
  ProfileSections s;
  s[0] = topics.empty() ? "No recurring subjects stand out."
                        : fmt::format("Keeps returning to: {}.", Join(topics, ", "));
  s[1] = fmt::format("Interests span {} distinct subject areas.", topics.size());
  s[2] = topics.size() <= 2 ? "Specialises in a narrow set of subjects."
                            : "Explores a broad range of subjects.";
  s[3] = fmt::format("Recent listening covers {} top-ranked episodes.", episodes);
  const long pct = duration > 0 ? static_cast<long>((100 * listened) / duration) : 0;
  s[4] = fmt::format("Listens to about {} percent of each episode on average.", pct);
  const long minutes = episodes > 0 ? static_cast<long>((duration / episodes + 30) / 60) : 0;
  s[5] = fmt::format("Favours episodes of roughly {} minutes.", minutes);
  return FormatProfileResponse(s);
}

std::vector<std::string> MatchedTags(const std::vector<std::string>& tags,
                                     std::string_view context) {
  std::vector<std::string> hits;
  for (const auto& tag : tags) {
    if (ContainsIgnoreCase(context, tag)) hits.push_back(tag);
  }
  return hits;
}

std::string PointwiseAnswer(MockPolicy policy, std::string_view prompt) {
  if (policy == MockPolicy::kEchoAligned) {
    return "RATIONALE: The mock judge accepts every candidate episode.\nVERDICT: ALIGNED\n";
  }
  const auto context =
      ExtractBlock(prompt, markers::kContextBegin, markers::kContextEnd).value_or("");
  const auto candidate =
      ExtractBlock(prompt, markers::kCandidateBegin, markers::kCandidateEnd).value_or("");
  const auto hits = MatchedTags(TagsInBlock(candidate), context);
  if (hits.empty()) {
    return "RATIONALE: None of the episode's topics appear in the listener context.\n"
           "VERDICT: NOT_ALIGNED\n";
  }
  return fmt::format("RATIONALE: The listener context mentions {}.\nVERDICT: ALIGNED\n",
                     Join(hits, ", "));
}

std::string PairwiseAnswer(MockPolicy policy, std::string_view prompt) {
  if (policy == MockPolicy::kEchoAligned) {
    return "TOPIC_MATCH: Both lists are acceptable.\nFORMAT_STYLE_MATCH: Both lists are "
           "acceptable.\nVARIETY: Both lists are acceptable.\nVERDICT: TIE\n";
  }
  const auto context =
      ExtractBlock(prompt, markers::kContextBegin, markers::kContextEnd).value_or("");
  const auto list_a = ExtractBlock(prompt, markers::kListABegin, markers::kListAEnd).value_or("");
  const auto list_b = ExtractBlock(prompt, markers::kListBBegin, markers::kListBEnd).value_or("");
  const auto hits_a = MatchedTags(TagsInBlock(list_a), context).size();
  const auto hits_b = MatchedTags(TagsInBlock(list_b), context).size();
  const char* verdict = hits_a > hits_b ? "A" : hits_b > hits_a ? "B" : "TIE";
  return fmt::format(
      "TOPIC_MATCH: List A has {} topic hits against the listener context, list B has {}.\n"
      "FORMAT_STYLE_MATCH: Not assessed by the mock judge.\n"
      "VARIETY: Not assessed by the mock judge.\n"
      "VERDICT: {}\n",
      hits_a, hits_b, verdict);
}

}  // namespace

std::string_view ToString(MockPolicy policy) {
  switch (policy) {
    case MockPolicy::kEchoAligned: return "echo-aligned";
    case MockPolicy::kTopicOverlap: return "topic-overlap";
    case MockPolicy::kScripted: return "scripted";
  }
  return "unknown";
}

MockPolicy ParseMockPolicy(std::string_view name) {
  if (name == "echo-aligned") return MockPolicy::kEchoAligned;
  if (name == "topic-overlap") return MockPolicy::kTopicOverlap;
  if (name == "scripted") return MockPolicy::kScripted;
  throw ConfigError(fmt::format("unknown mock policy '{}'", name));
}

std::vector<std::string> TagsInBlock(std::string_view block) {
  std::vector<std::string> tags;
  for (auto line : Lines(block)) {
    const auto trimmed = Trim(line);
    if (!trimmed.starts_with(markers::kTagsPrefix)) continue;
    std::string_view rest = trimmed.substr(markers::kTagsPrefix.size());
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      auto comma = rest.find(',', pos);
      if (comma == std::string_view::npos) comma = rest.size();
      const auto tag = Trim(rest.substr(pos, comma - pos));
      if (!tag.empty() && tag != "(none)") tags.emplace_back(tag);
      pos = comma + 1;
    }
  }
  return tags;
}

MockJudgeProvider::MockJudgeProvider(MockPolicy policy,
                                     std::map<std::string, std::string> scripted)
    : policy_(policy), scripted_(std::move(scripted)) {}

MockJudgeProvider MockJudgeProvider::FromScriptFile(const std::filesystem::path& path) {
  std::map<std::string, std::string> scripted;
  try {
    const auto doc = nlohmann::json::parse(ReadFile(path));
    for (const auto& [key, value] : doc.items()) {
      scripted.emplace(key, value.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("bad script file '{}': {}", path.string(), e.what()));
  }
  return MockJudgeProvider(MockPolicy::kScripted, std::move(scripted));
}

std::string MockJudgeProvider::Complete(const GenerationRequest& request) {
  const std::string_view prompt = request.prompt;
  if (policy_ == MockPolicy::kScripted) {
    const std::string key = Sha256Hex(prompt);
    const auto it = scripted_.find(key);
    if (it == scripted_.end()) throw ProviderError(fmt::format("unscripted prompt {}", key));
    return it->second;
  }
  if (Contains(prompt, markers::kTaskProfile)) return SynthesizeProfile(prompt);
  if (Contains(prompt, markers::kTaskPointwise)) return PointwiseAnswer(policy_, prompt);
  if (Contains(prompt, markers::kTaskPairwise)) return PairwiseAnswer(policy_, prompt);
  throw ProviderError("mock provider cannot classify the prompt");
}

std::string MockJudgeProvider::name() const {
  return fmt::format("mock:{}", ToString(policy_));
}

}  // namespace podjudge
