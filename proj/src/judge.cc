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

#include "podjudge/judge.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

#include <fmt/format.h>

#include "podjudge/util.h"

namespace podjudge {

using nlohmann::json;

namespace {

template <typename Enum, std::size_t N>
Enum FromName(std::string_view s, const std::array<std::string_view, N>& names,
              const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (s == names[i]) return static_cast<Enum>(i);
  }
  throw DataError(fmt::format("unknown {} '{}'", what, s));
}

constexpr std::array<std::string_view, 2> kVerdictNames = {"aligned", "not_aligned"};
constexpr std::array<std::string_view, 3> kVariantNames = {"laaj_profile", "laaj_history",
                                                           "sbert_sim"};
constexpr std::array<std::string_view, 2> kTagNames = {"A", "B"};
constexpr std::array<std::string_view, 3> kTaggedNames = {"A", "B", "tie"};
constexpr std::array<std::string_view, 3> kPreferenceNames = {"model_1", "model_2", "tie"};

std::vector<std::size_t> FindAll(const std::string& upper, std::string_view marker) {
  std::vector<std::size_t> out;
  for (auto pos = upper.find(marker); pos != std::string::npos;
       pos = upper.find(marker, pos + 1)) {
    out.push_back(pos);
  }
  return out;
}

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool IsTokenChar(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

// Reads the verdict token after a VERDICT: marker; `pos` ends past it.
std::string ReadToken(std::string_view raw, std::size_t& pos) {
  while (pos < raw.size() && IsSpace(raw[pos])) ++pos;
  const std::size_t start = pos;
  while (pos < raw.size() && IsTokenChar(raw[pos])) ++pos;
  return ToUpper(raw.substr(start, pos - start));
}

// Decimal per `\d+(\.\d+)?|\.\d+`, nothing else.
std::optional<double> ParseDecimal(std::string_view s) {
  std::size_t i = 0;
  std::size_t int_digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++int_digits;
  std::size_t frac_digits = 0;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++frac_digits;
    if (frac_digits == 0) return std::nullopt;
  }
  if (i != s.size() || (int_digits == 0 && frac_digits == 0)) return std::nullopt;
  double value = 0.0;
  const auto result = std::from_chars(s.data(), s.data() + s.size(), value);
  if (result.ec != std::errc() || result.ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::size_t ExpectOnce(const std::string& upper, std::string_view marker) {
  const auto hits = FindAll(upper, marker);
  if (hits.size() != 1) {
    throw JudgmentParseError(
        fmt::format("expected exactly one '{}' but found {}", marker, hits.size()));
  }
  return hits.front();
}

std::string RenderEpisodeBlock(const Episode& episode, std::string_view show_title,
                               const JudgeOptions& options, std::string_view indent,
                               std::string_view first_prefix) {
  std::string out;
  out += fmt::format("{}Title: {}\n", first_prefix,
                     TruncateWithEllipsis(episode.title, options.title_budget));
  out += fmt::format("{}Show: {}\n", indent, TruncateWithEllipsis(show_title, options.title_budget));
  out += fmt::format("{}{} {}\n", indent, markers::kTagsPrefix,
                     episode.topic_tags.empty() ? "(none)" : Join(episode.topic_tags, ", "));
  out += fmt::format("{}Duration: {} min\n", indent, (episode.duration_seconds + 30) / 60);
  if (!episode.description.empty()) {
    out += fmt::format("{}Description: {}\n", indent,
                       TruncateWithEllipsis(episode.description, options.description_budget));
  }
  if (episode.transcript_snippet && !episode.transcript_snippet->empty()) {
    out += fmt::format("{}Transcript excerpt: {}\n", indent,
                       TruncateWithEllipsis(*episode.transcript_snippet,
                                            options.transcript_budget));
  }
  return out;
}

std::string RenderList(const RecommendationList& list, const Corpus& corpus,
                       const JudgeOptions& options) {
  std::string out;
  int rank = 0;
  for (const auto& id : list.episodes) {
    const Episode* episode = corpus.FindEpisode(id);
    if (episode == nullptr) throw DataError(fmt::format("unknown episode '{}'", id));
    const Show* show = corpus.FindShow(episode->show_id);
    out += RenderEpisodeBlock(*episode, show != nullptr ? show->title : episode->show_id,
                              options, "   ", fmt::format("{}. ", ++rank));
  }
  if (!out.empty()) out.pop_back();
  return out;
}

std::string ContextIntro(const JudgeContext& ctx) {
  return ctx.kind == ContextKind::kProfile
             ? "The listener is described by a profile distilled from their recent "
               "listening."
             : "The listener is described by the shows and episodes in their recent "
               "listening history.";
}

}  // namespace

std::string_view ToString(Verdict v) { return kVerdictNames[static_cast<int>(v)]; }
std::string_view ToString(JudgeVariant v) { return kVariantNames[static_cast<int>(v)]; }
std::string_view ToString(Tag t) { return kTagNames[static_cast<int>(t)]; }
std::string_view ToString(TaggedVerdict v) { return kTaggedNames[static_cast<int>(v)]; }
std::string_view ToString(Preference p) { return kPreferenceNames[static_cast<int>(p)]; }
Verdict ParseVerdict(std::string_view s) { return FromName<Verdict>(s, kVerdictNames, "verdict"); }
JudgeVariant ParseJudgeVariant(std::string_view s) {
  return FromName<JudgeVariant>(s, kVariantNames, "judge variant");
}
Tag ParseTag(std::string_view s) { return FromName<Tag>(s, kTagNames, "tag"); }
TaggedVerdict ParseTaggedVerdict(std::string_view s) {
  return FromName<TaggedVerdict>(s, kTaggedNames, "tagged verdict");
}
Preference ParsePreference(std::string_view s) {
  return FromName<Preference>(s, kPreferenceNames, "preference");
}

JudgeContext JudgeContext::FromProfile(UserProfile profile) {
  JudgeContext ctx;
  ctx.kind = ContextKind::kProfile;
  ctx.user_id = profile.user_id;
  ctx.profile = std::move(profile);
  return ctx;
}

JudgeContext JudgeContext::FromHistory(const UserHistory& history, const Corpus& corpus,
                                       std::size_t excerpt_budget) {
  JudgeContext ctx;
  ctx.kind = ContextKind::kHistory;
  ctx.user_id = history.user_id;
  std::vector<std::string> seen;
  for (auto it = history.events.rbegin(); it != history.events.rend(); ++it) {
    if (std::find(seen.begin(), seen.end(), it->episode_id) != seen.end()) continue;
    seen.push_back(it->episode_id);
    const Episode* episode = corpus.FindEpisode(it->episode_id);
    if (episode == nullptr) continue;
    const Show* show = corpus.FindShow(episode->show_id);
    ctx.history_items.push_back({show != nullptr ? show->title : episode->show_id,
                                 episode->title,
                                 TruncateWithEllipsis(episode->description, excerpt_budget)});
  }
  return ctx;
}

JudgeVariant JudgeContext::variant() const {
  return kind == ContextKind::kProfile ? JudgeVariant::kLaajProfile : JudgeVariant::kLaajHistory;
}

void JudgeContext::Validate() const {
  if (kind == ContextKind::kProfile && !profile) {
    throw ArgumentError(fmt::format("profile context for '{}' has no profile", user_id));
  }
  if (kind == ContextKind::kHistory && history_items.empty()) {
    throw ArgumentError(fmt::format("history context for '{}' has no items", user_id));
  }
}

std::string TagAssignment::model_1() const {
  return tag_of_first_model == Tag::kA ? model_under_tag_a : model_under_tag_b;
}

std::string TagAssignment::model_2() const {
  return tag_of_first_model == Tag::kA ? model_under_tag_b : model_under_tag_a;
}

const std::string& TagAssignment::model_under(Tag t) const {
  return t == Tag::kA ? model_under_tag_a : model_under_tag_b;
}

std::optional<std::string> PairwiseJudgment::winner() const {
  switch (resolved_verdict) {
    case Preference::kModel1: return assignment.model_1();
    case Preference::kModel2: return assignment.model_2();
    case Preference::kTie: return std::nullopt;
  }
  return std::nullopt;
}

void to_json(json& j, const PointwiseJudgment& p) {
  j = json{{"user_id", p.user_id},
           {"episode_id", p.episode_id},
           {"verdict", ToString(p.verdict)},
           {"confidence", p.confidence},
           {"confidence_reported", p.confidence_reported},
           {"rationale", p.rationale},
           {"judge_variant", ToString(p.judge_variant)},
           {"template_version", p.template_version},
           {"raw_response", p.raw_response}};
}

void from_json(const json& j, PointwiseJudgment& p) {
  p.user_id = j.at("user_id").get<std::string>();
  p.episode_id = j.at("episode_id").get<std::string>();
  p.verdict = ParseVerdict(j.at("verdict").get<std::string>());
  p.confidence = j.at("confidence").get<double>();
  if (!(p.confidence >= 0.0 && p.confidence <= 1.0)) {
    throw DataError(fmt::format("confidence {} outside [0,1]", p.confidence));
  }
  p.confidence_reported = j.value("confidence_reported", false);
  p.rationale = j.value("rationale", "");
  p.judge_variant = ParseJudgeVariant(j.at("judge_variant").get<std::string>());
  p.template_version = j.value("template_version", "");
  p.raw_response = j.value("raw_response", "");
}

void to_json(json& j, const TagAssignment& a) {
  j = json{{"seed", a.seed},
           {"tag_of_first_model", ToString(a.tag_of_first_model)},
           {"model_under_tag_a", a.model_under_tag_a},
           {"model_under_tag_b", a.model_under_tag_b}};
}

void from_json(const json& j, TagAssignment& a) {
  a.seed = j.at("seed").get<std::uint64_t>();
  a.tag_of_first_model = ParseTag(j.at("tag_of_first_model").get<std::string>());
  a.model_under_tag_a = j.at("model_under_tag_a").get<std::string>();
  a.model_under_tag_b = j.at("model_under_tag_b").get<std::string>();
  if (a.model_under_tag_a == a.model_under_tag_b) {
    throw DataError("tag assignment maps both tags to the same model");
  }
}

void to_json(json& j, const PairwiseJudgment& p) {
  json dims = json::array();
  for (const auto& [dimension, assessment] : p.dimension_rationales) {
    dims.push_back({{"dimension", dimension}, {"assessment", assessment}});
  }
  j = json{{"user_id", p.user_id},
           {"assignment", p.assignment},
           {"model_1", p.assignment.model_1()},
           {"model_2", p.assignment.model_2()},
           {"dimension_rationales", dims},
           {"tagged_verdict", ToString(p.tagged_verdict)},
           {"resolved_verdict", ToString(p.resolved_verdict)},
           {"judge_variant", ToString(p.judge_variant)},
           {"template_version", p.template_version},
           {"raw_response", p.raw_response}};
}

void from_json(const json& j, PairwiseJudgment& p) {
  p.user_id = j.at("user_id").get<std::string>();
  p.assignment = j.at("assignment").get<TagAssignment>();
  p.dimension_rationales.clear();
  for (const auto& d : j.at("dimension_rationales")) {
    p.dimension_rationales.emplace_back(d.at("dimension").get<std::string>(),
                                        d.at("assessment").get<std::string>());
  }
  p.tagged_verdict = ParseTaggedVerdict(j.at("tagged_verdict").get<std::string>());
  p.resolved_verdict = ParsePreference(j.at("resolved_verdict").get<std::string>());
  p.judge_variant = ParseJudgeVariant(j.at("judge_variant").get<std::string>());
  p.template_version = j.value("template_version", "");
  p.raw_response = j.value("raw_response", "");
  if (p.resolved_verdict != Deshuffle(p.tagged_verdict, p.assignment)) {
    throw DataError(fmt::format("pairwise record for '{}' is inconsistent with its assignment",
                                p.user_id));
  }
}

TagAssignment ShuffleTags(std::string_view model_1, std::string_view model_2,
                          std::uint64_t seed) {
  if (model_1 == model_2) {
    throw ArgumentError(fmt::format("cannot compare model '{}' with itself", model_1));
  }
  TagAssignment a;
  a.seed = seed;
  a.tag_of_first_model = (SplitMix64(seed) >> 63) == 0 ? Tag::kA : Tag::kB;
  if (a.tag_of_first_model == Tag::kA) {
    a.model_under_tag_a = model_1;
    a.model_under_tag_b = model_2;
  } else {
    a.model_under_tag_a = model_2;
    a.model_under_tag_b = model_1;
  }
  return a;
}

Preference Deshuffle(TaggedVerdict verdict, const TagAssignment& assignment) {
  if (verdict == TaggedVerdict::kTie) return Preference::kTie;
  const Tag tag = verdict == TaggedVerdict::kA ? Tag::kA : Tag::kB;
  return tag == assignment.tag_of_first_model ? Preference::kModel1 : Preference::kModel2;
}

std::uint64_t DeriveEvaluationSeed(std::uint64_t master_seed, std::string_view user_id,
                                   std::string_view model_1, std::string_view model_2) {
  const auto [lo, hi] = std::minmax(model_1, model_2);
  std::uint64_t h = Fnv1a64(user_id);
  h = Fnv1a64("\x1f", h);
  h = Fnv1a64(lo, h);
  h = Fnv1a64("\x1f", h);
  h = Fnv1a64(hi, h);
  return SplitMix64(master_seed ^ h);
}

ParsedPointwise ParsePointwiseResponse(std::string_view raw) {
  const std::string upper = ToUpper(raw);
  const std::size_t rationale_at = ExpectOnce(upper, "RATIONALE:");
  const std::size_t verdict_at = ExpectOnce(upper, "VERDICT:");
  const auto confidence_hits = FindAll(upper, "CONFIDENCE:");
  if (confidence_hits.size() > 1) {
    throw JudgmentParseError("expected at most one 'CONFIDENCE:'");
  }
  if (rationale_at > verdict_at) throw JudgmentParseError("'VERDICT:' precedes 'RATIONALE:'");

  ParsedPointwise parsed;
  const std::size_t text_start = rationale_at + std::string_view("RATIONALE:").size();
  parsed.rationale = std::string(Trim(raw.substr(text_start, verdict_at - text_start)));
  if (parsed.rationale.empty()) throw JudgmentParseError("empty rationale");

  std::size_t pos = verdict_at + std::string_view("VERDICT:").size();
  const std::string token = ReadToken(raw, pos);
  if (token == "ALIGNED") {
    parsed.verdict = Verdict::kAligned;
  } else if (token == "NOT_ALIGNED") {
    parsed.verdict = Verdict::kNotAligned;
  } else {
    throw JudgmentParseError(fmt::format("invalid verdict '{}'", token));
  }

  std::string_view rest = raw.substr(pos);
  if (Trim(rest).empty()) return parsed;
  if (!IsSpace(rest.front())) throw JudgmentParseError("unexpected text after the verdict");
  rest = Trim(rest);
  constexpr std::string_view kConfidence = "CONFIDENCE:";
  if (!StartsWithIgnoreCase(rest, kConfidence)) {
    throw JudgmentParseError("unexpected text after the verdict");
  }
  const auto value = ParseDecimal(Trim(rest.substr(kConfidence.size())));
  if (!value) throw JudgmentParseError("CONFIDENCE is not a decimal number");
  if (*value > 1.0) throw JudgmentParseError(fmt::format("CONFIDENCE {} exceeds 1", *value));
  parsed.confidence = *value;
  return parsed;
}

ParsedPairwise ParsePairwiseResponse(std::string_view raw) {
  const std::string upper = ToUpper(raw);
  constexpr std::array<std::string_view, 3> kMarkers = {"TOPIC_MATCH:", "FORMAT_STYLE_MATCH:",
                                                        "VARIETY:"};
  constexpr std::array<std::string_view, 3> kNames = {kDimensionTopicMatch,
                                                      kDimensionFormatStyle, kDimensionVariety};
  std::array<std::size_t, 4> at{};
  for (std::size_t i = 0; i < kMarkers.size(); ++i) at[i] = ExpectOnce(upper, kMarkers[i]);
  at[3] = ExpectOnce(upper, "VERDICT:");
  for (std::size_t i = 0; i + 1 < at.size(); ++i) {
    if (at[i] > at[i + 1]) throw JudgmentParseError("pairwise sections are out of order");
  }

  ParsedPairwise parsed;
  for (std::size_t i = 0; i < kMarkers.size(); ++i) {
    const std::size_t start = at[i] + kMarkers[i].size();
    std::string text(Trim(raw.substr(start, at[i + 1] - start)));
    if (text.empty()) {
      throw JudgmentParseError(fmt::format("empty {} assessment", kNames[i]));
    }
    parsed.dimensions.emplace_back(std::string(kNames[i]), std::move(text));
  }
  std::size_t pos = at[3] + std::string_view("VERDICT:").size();
  const std::string token = ReadToken(raw, pos);
  if (token == "A") {
    parsed.verdict = TaggedVerdict::kA;
  } else if (token == "B") {
    parsed.verdict = TaggedVerdict::kB;
  } else if (token == "TIE") {
    parsed.verdict = TaggedVerdict::kTie;
  } else {
    throw JudgmentParseError(fmt::format("invalid pairwise verdict '{}'", token));
  }
  if (!Trim(raw.substr(pos)).empty()) {
    throw JudgmentParseError("unexpected text after the verdict");
  }
  return parsed;
}

std::string RenderContext(const JudgeContext& ctx, const JudgeOptions& options) {
  ctx.Validate();
  if (ctx.kind == ContextKind::kProfile) return ctx.profile->ContextText();
  const std::size_t shown = std::min(options.history_cap, ctx.history_items.size());
  std::string out;
  if (shown < ctx.history_items.size()) {
    out += fmt::format("(showing the {} most recent of {} listened episodes)\n", shown,
                       ctx.history_items.size());
  }
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& item = ctx.history_items[i];
    out += fmt::format("- {} / {}", TruncateWithEllipsis(item.show_title, options.title_budget),
                       TruncateWithEllipsis(item.episode_title, options.title_budget));
    if (!item.excerpt.empty()) out += fmt::format(": {}", item.excerpt);
    out += '\n';
  }
  out.pop_back();
  return out;
}

std::string RenderPointwisePrompt(const JudgeContext& ctx, const Episode& episode,
                                  std::string_view show_title, const PromptTemplate& tmpl,
                                  const JudgeOptions& options) {
  std::string block = RenderEpisodeBlock(episode, show_title, options, "", "");
  block.pop_back();
  return tmpl.Render({{"context_intro", ContextIntro(ctx)},
                      {"context", RenderContext(ctx, options)},
                      {"episode", block}});
}

std::string PointwiseReaskSuffix(const JudgmentParseError& error) {
  return fmt::format(
      "\n\nFORMAT REMINDER: your previous reply could not be used ({}). Reply again using "
      "RATIONALE:, then VERDICT: ALIGNED or VERDICT: NOT_ALIGNED, then optionally "
      "CONFIDENCE: with a number between 0 and 1. Use each label exactly once and write "
      "nothing after the last value.\n",
      error.what());
}

std::string PairwiseReaskSuffix(const JudgmentParseError& error) {
  return fmt::format(
      "\n\nFORMAT REMINDER: your previous reply could not be used ({}). Reply again with "
      "TOPIC_MATCH:, FORMAT_STYLE_MATCH:, VARIETY: (each non-empty, in this order), then "
      "VERDICT: A, VERDICT: B or VERDICT: TIE. Use each label exactly once and write nothing "
      "after the verdict.\n",
      error.what());
}

namespace {

// Generates, parses, and re-asks once on a parse failure.
template <typename Parse>
auto GenerateParsed(Gateway& gateway, GenerationRequest request, Parse&& parse,
                    std::string (*reask)(const JudgmentParseError&), std::string& raw)
    -> decltype(parse(std::string_view{})) {
  raw = gateway.Generate(request).text;
  try {
    return parse(raw);
  } catch (const JudgmentParseError& first) {
    request.prompt += reask(first);
    request.request_tag += ":reask";
  }
  raw = gateway.Generate(request).text;
  try {
    return parse(raw);
  } catch (const JudgmentParseError& second) {
    throw UnparseableResponseError(
        fmt::format("unparseable judgment ({}): {}", request.request_tag, second.what()), raw);
  }
}

}  // namespace

PointwiseJudgment JudgePointwise(const JudgeContext& ctx, const Episode& episode,
                                 std::string_view show_title, Gateway& gateway,
                                 const PromptTemplate& tmpl, const JudgeOptions& options) {
  GenerationRequest request{RenderPointwisePrompt(ctx, episode, show_title, tmpl, options),
                            options.model_id, options.temperature, options.max_output_tokens,
                            fmt::format("pointwise:{}:{}:{}", ToString(ctx.variant()),
                                        ctx.user_id, episode.episode_id)};
  PointwiseJudgment judgment;
  const ParsedPointwise parsed =
      GenerateParsed(gateway, std::move(request), ParsePointwiseResponse,
                     &PointwiseReaskSuffix, judgment.raw_response);
  judgment.user_id = ctx.user_id;
  judgment.episode_id = episode.episode_id;
  judgment.verdict = parsed.verdict;
  judgment.confidence_reported = parsed.confidence.has_value();
  judgment.confidence =
      parsed.confidence.value_or(parsed.verdict == Verdict::kAligned ? 1.0 : 0.0);
  judgment.rationale = parsed.rationale;
  judgment.judge_variant = ctx.variant();
  judgment.template_version = tmpl.version();
  return judgment;
}

std::string RenderPairwisePrompt(const JudgeContext& ctx, const RecommendationList& under_a,
                                 const RecommendationList& under_b, const Corpus& corpus,
                                 const PromptTemplate& tmpl, const JudgeOptions& options) {
  return tmpl.Render({{"context_intro", ContextIntro(ctx)},
                      {"context", RenderContext(ctx, options)},
                      {"list_a", RenderList(under_a, corpus, options)},
                      {"list_b", RenderList(under_b, corpus, options)}});
}

PairwiseJudgment JudgePairwise(const JudgeContext& ctx, const RecommendationList& list_1,
                               const RecommendationList& list_2, const Corpus& corpus,
                               Gateway& gateway, std::uint64_t seed,
                               const PromptTemplate& tmpl, const JudgeOptions& options) {
  return JudgePairwise(ctx, list_1, list_2, corpus, gateway,
                       ShuffleTags(list_1.model_id, list_2.model_id, seed), tmpl, options);
}

PairwiseJudgment JudgePairwise(const JudgeContext& ctx, const RecommendationList& list_1,
                               const RecommendationList& list_2, const Corpus& corpus,
                               Gateway& gateway, const TagAssignment& assignment,
                               const PromptTemplate& tmpl, const JudgeOptions& options) {
  if (list_1.user_id != list_2.user_id) {
    throw ArgumentError(fmt::format("lists belong to different users ('{}' vs '{}')",
                                    list_1.user_id, list_2.user_id));
  }
  if (list_1.model_id == list_2.model_id) {
    throw ArgumentError(fmt::format("both lists come from model '{}'", list_1.model_id));
  }
  TagAssignment a = assignment;
  if (a.model_under_tag_a == list_1.model_id && a.model_under_tag_b == list_2.model_id) {
    a.tag_of_first_model = Tag::kA;
  } else if (a.model_under_tag_a == list_2.model_id && a.model_under_tag_b == list_1.model_id) {
    a.tag_of_first_model = Tag::kB;
  } else {
    throw ArgumentError("tag assignment does not cover exactly the two list models");
  }
  const RecommendationList& under_a = a.tag_of_first_model == Tag::kA ? list_1 : list_2;
  const RecommendationList& under_b = a.tag_of_first_model == Tag::kA ? list_2 : list_1;

  GenerationRequest request{RenderPairwisePrompt(ctx, under_a, under_b, corpus, tmpl, options),
                            options.model_id, options.temperature, options.max_output_tokens,
                            fmt::format("pairwise:{}:{}", ToString(ctx.variant()), ctx.user_id)};
  PairwiseJudgment judgment;
  const ParsedPairwise parsed =
      GenerateParsed(gateway, std::move(request), ParsePairwiseResponse,
                     &PairwiseReaskSuffix, judgment.raw_response);
  judgment.user_id = ctx.user_id;
  judgment.assignment = std::move(a);
  judgment.dimension_rationales = parsed.dimensions;
  judgment.tagged_verdict = parsed.verdict;
  judgment.resolved_verdict = Deshuffle(parsed.verdict, judgment.assignment);
  judgment.judge_variant = ctx.variant();
  judgment.template_version = tmpl.version();
  return judgment;
}

}  // namespace podjudge
