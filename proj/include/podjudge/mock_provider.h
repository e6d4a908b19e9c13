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

// Offline text providers used by tests and the bundled synthetic runs.

#ifndef PODJUDGE_MOCK_PROVIDER_H_
#define PODJUDGE_MOCK_PROVIDER_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "podjudge/gateway.h"

namespace podjudge {

enum class MockPolicy {
  // Every pointwise prompt is judged aligned; pairwise prompts tie.
  kEchoAligned,
  // Pointwise: aligned iff any candidate tag occurs (case-insensitive
  // substring) in the USER CONTEXT block. Pairwise: the list whose tags hit
  // the context more often wins; equal counts tie.
  kTopicOverlap,
  // Responses looked up by SHA-256 of the prompt; unknown prompts raise
  // ProviderError("unscripted prompt ...").
  kScripted,
};

std::string_view ToString(MockPolicy policy);
MockPolicy ParseMockPolicy(std::string_view name);

// Both non-scripted policies answer profile prompts with a canonical
// six-section profile synthesised from the prompt's episode block: the
// topical section lists the episode tags in rank order, so a larger episode
// budget yields a superset of topics.
class MockJudgeProvider : public TextProvider {
 public:
  explicit MockJudgeProvider(MockPolicy policy,
                             std::map<std::string, std::string> scripted = {});

  // JSON object mapping prompt SHA-256 hex -> response text.
  static MockJudgeProvider FromScriptFile(const std::filesystem::path& path);

  std::string Complete(const GenerationRequest& request) override;
  std::string name() const override;

  MockPolicy policy() const { return policy_; }

 private:
  MockPolicy policy_;
  std::map<std::string, std::string> scripted_;
};

// Tags listed on `Tags:` lines of `block`, in order of appearance.
std::vector<std::string> TagsInBlock(std::string_view block);

}  // namespace podjudge

#endif  // PODJUDGE_MOCK_PROVIDER_H_
