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

// Regex statement of the judge reply grammars, kept independent of the
// parsers, and a mutator that perturbs well-formed replies.

#ifndef PODJUDGE_TESTS_GRAMMAR_ORACLE_H_
#define PODJUDGE_TESTS_GRAMMAR_ORACLE_H_

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <random>
#include <regex>
#include <string>
#include <vector>

#include "podjudge/judge.h"

namespace podjudge::testing {

inline int CountCi(const std::string& text, const std::string& marker) {
  std::string upper = text;
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  int n = 0;
  for (auto pos = upper.find(marker); pos != std::string::npos; pos = upper.find(marker, pos + 1)) {
    ++n;
  }
  return n;
}

inline bool Blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

inline std::string Strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n\r\f\v");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\n\r\f\v") - b + 1);
}

struct PointwiseOracle {
  bool ok = false;
  Verdict verdict = Verdict::kNotAligned;
  std::optional<double> confidence;
  std::string rationale;
};

inline PointwiseOracle OraclePointwise(const std::string& raw) {
  static const std::regex re(
      R"(^[\s\S]*?RATIONALE:([\s\S]*?)VERDICT:\s*(ALIGNED|NOT_ALIGNED)(?:\s+CONFIDENCE:\s*(\d+(?:\.\d+)?|\.\d+))?\s*$)",
      std::regex::icase);
  PointwiseOracle out;
  if (CountCi(raw, "RATIONALE:") != 1 || CountCi(raw, "VERDICT:") != 1 ||
      CountCi(raw, "CONFIDENCE:") > 1) {
    return out;
  }
  std::smatch m;
  if (!std::regex_match(raw, m, re)) return out;
  if (Blank(m[1].str())) return out;
  out.rationale = Strip(m[1].str());
  std::string verdict = m[2].str();
  for (char& c : verdict) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  out.verdict = verdict == "ALIGNED" ? Verdict::kAligned : Verdict::kNotAligned;
  if (m[3].matched) {
    const double v = std::stod(m[3].str());
    if (v > 1.0) return out;
    out.confidence = v;
  }
  out.ok = true;
  return out;
}

struct PairwiseOracle {
  bool ok = false;
  TaggedVerdict verdict = TaggedVerdict::kTie;
  std::array<std::string, 3> texts;
};

inline PairwiseOracle OraclePairwise(const std::string& raw) {
  static const std::regex re(
      R"(^[\s\S]*?TOPIC_MATCH:([\s\S]*?)FORMAT_STYLE_MATCH:([\s\S]*?)VARIETY:([\s\S]*?)VERDICT:\s*(A|B|TIE)\s*$)",
      std::regex::icase);
  PairwiseOracle out;
  for (const char* marker : {"TOPIC_MATCH:", "FORMAT_STYLE_MATCH:", "VARIETY:", "VERDICT:"}) {
    if (CountCi(raw, marker) != 1) return out;
  }
  std::smatch m;
  if (!std::regex_match(raw, m, re)) return out;
  for (int i = 0; i < 3; ++i) {
    if (Blank(m[i + 1].str())) return out;
    out.texts[i] = Strip(m[i + 1].str());
  }
  std::string v = m[4].str();
  for (char& c : v) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  out.verdict = v == "A" ? TaggedVerdict::kA : v == "B" ? TaggedVerdict::kB : TaggedVerdict::kTie;
  out.ok = true;
  return out;
}

class Mutator {
 public:
  explicit Mutator(std::uint64_t seed, std::vector<std::string> tokens)
      : gen_(seed), tokens_(std::move(tokens)) {}

  std::string Mutate(std::string s) {
    const int ops = Pick(4);
    for (int i = 0; i <= ops; ++i) {
      const std::size_t at = s.empty() ? 0 : Pick(static_cast<int>(s.size()) + 1);
      switch (Pick(7)) {
        case 0:
          s.insert(at, 1, kAlphabet[Pick(sizeof(kAlphabet) - 1)]);
          break;
        case 1:
          if (!s.empty() && at < s.size()) s.erase(at, 1 + Pick(3));
          break;
        case 2:
          s.insert(at, tokens_[Pick(static_cast<int>(tokens_.size()))]);
          break;
        case 3:
          if (at < s.size()) s[at] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[at])));
          break;
        case 4:
          s += tokens_[Pick(static_cast<int>(tokens_.size()))];
          break;
        case 5:
          if (at < s.size()) s = s.substr(0, at);
          break;
        default:
          break;  // leave as is, so some inputs stay valid
      }
    }
    return s;
  }

 private:
  static constexpr char kAlphabet[] = "aAbZ _:\n\t.01259-x!";
  int Pick(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }
  std::mt19937_64 gen_;
  std::vector<std::string> tokens_;
};

}  // namespace podjudge::testing

#endif  // PODJUDGE_TESTS_GRAMMAR_ORACLE_H_
