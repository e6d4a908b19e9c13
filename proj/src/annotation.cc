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

#include "podjudge/annotation.h"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include "podjudge/errors.h"
#include "podjudge/judge.h"
#include "podjudge/jsonl.h"

namespace podjudge {

using nlohmann::json;

namespace {

constexpr std::string_view kPreferenceKey = "model_preference";

Instant Now() {
  return std::chrono::time_point_cast<std::chrono::milliseconds>(
      std::chrono::system_clock::now());
}

template <typename T>
std::optional<T> OptionalField(const json& body, const char* key) {
  if (!body.contains(key) || body.at(key).is_null()) return std::nullopt;
  try {
    return body.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(fmt::format("field '{}' has the wrong type", key));
  }
}

std::string EpisodeKey(std::string_view episode_id) {
  return fmt::format("episode_alignment/{}", episode_id);
}

std::string QuestionKey(std::string_view question) {
  return fmt::format("profile_accuracy/{}", question);
}

json CardJson(const SessionEpisode& e) {
  json j = {{"episode_id", e.episode_id},
            {"title", e.title},
            {"show_name", e.show_name},
            {"description", e.description}};
  j["image_url"] = e.image_url ? json(*e.image_url) : json(nullptr);
  j["audio_url"] = e.audio_url ? json(*e.audio_url) : json(nullptr);
  return j;
}

}  // namespace

std::string_view ToString(Side side) { return side == Side::kLeft ? "left" : "right"; }

Side ParseSide(std::string_view s) {
  const auto lower = ToLower(s);
  if (lower == "left") return Side::kLeft;
  if (lower == "right") return Side::kRight;
  throw ValidationError(fmt::format("unknown side '{}'", s));
}

std::string NewSessionToken() {
  unsigned char bytes[16];
  if (RAND_bytes(bytes, sizeof(bytes)) != 1) throw Error("RAND_bytes failed");
  unsigned char encoded[32];
  const int n = EVP_EncodeBlock(encoded, bytes, sizeof(bytes));
  std::string out(reinterpret_cast<const char*>(encoded), static_cast<std::size_t>(n));
  out.erase(std::remove(out.begin(), out.end(), '='), out.end());
  std::replace(out.begin(), out.end(), '+', '-');
  std::replace(out.begin(), out.end(), '/', '_');
  return out;
}

json ClientPayload(const Session& session) {
  json sections = json::array();
  for (const auto s : kAllProfileSections) {
    sections.push_back({{"title", SectionTitle(s)}, {"text", session.profile.section(s)}});
  }
  json left = json::array();
  for (const auto& e : session.left) left.push_back(CardJson(e));
  json right = json::array();
  for (const auto& e : session.right) right.push_back(CardJson(e));
  return {
      {"session_id", session.session_id},
      {"profile", {{"sections", sections}}},
      {"questions",
       {{{"id", kQuestionPreferences}, {"text", "This profile reflects my listening preferences."}},
        {{"id", kQuestionInterests}, {"text", "This profile captures my interests."}}}},
      {"left", left},
      {"right", right},
      {"completed", session.completed},
  };
}

AnnotationSubmission ParseSubmission(const json& body) {
  if (!body.is_object()) throw ValidationError("annotation body must be a JSON object");
  AnnotationSubmission out;
  const auto kind = OptionalField<std::string>(body, "kind");
  if (!kind) throw ValidationError("annotation body needs 'kind'");
  out.kind = ParseAnnotationKind(*kind);
  out.episode_id = OptionalField<std::string>(body, "episode_id");
  if (const auto side = OptionalField<std::string>(body, "side")) out.side = ParseSide(*side);
  out.position = OptionalField<int>(body, "position");
  out.likert = OptionalField<int>(body, "likert");
  out.question = OptionalField<std::string>(body, "question");
  out.comparative = OptionalField<int>(body, "comparative");
  return out;
}

std::optional<Side> ComparativeSide(int comparative) {
  if (comparative < 1 || comparative > 5) {
    throw ValidationError(fmt::format("comparative value {} outside 1..5", comparative));
  }
  if (comparative <= 2) return Side::kLeft;
  if (comparative >= 4) return Side::kRight;
  return std::nullopt;
}

AnnotationStore::AnnotationStore(const Corpus& corpus, std::map<std::string, UserProfile> profiles,
                                 ModelPair models)
    : AnnotationStore(corpus, std::move(profiles), std::move(models), Options{}) {}

AnnotationStore::AnnotationStore(const Corpus& corpus, std::map<std::string, UserProfile> profiles,
                                 ModelPair models, Options options)
    : corpus_(corpus),
      profiles_(std::move(profiles)),
      models_(std::move(models)),
      options_(std::move(options)) {
  if (models_.model_1.empty() || models_.model_1 == models_.model_2) {
    throw ArgumentError("annotation store needs two distinct model ids");
  }
  if (!options_.clock) options_.clock = Now;
  if (!options_.token_source) options_.token_source = NewSessionToken;
  if (options_.log_path && std::filesystem::exists(*options_.log_path)) Replay();
}

Session AnnotationStore::BuildSession(const std::string& user_id,
                                      const RecommendationList& list_1,
                                      const RecommendationList& list_2, std::uint64_t seed,
                                      std::string token, Instant created_at) const {
  const auto profile = profiles_.find(user_id);
  if (profile == profiles_.end()) {
    throw NotFoundError(fmt::format("no profile for user '{}'", user_id));
  }
  if (list_1.user_id != user_id || list_2.user_id != user_id) {
    throw ValidationError(fmt::format("lists must both belong to user '{}'", user_id));
  }
  if (list_1.model_id == list_2.model_id) {
    throw ValidationError("lists must come from two distinct models");
  }
  const bool study_pair =
      (list_1.model_id == models_.model_1 && list_2.model_id == models_.model_2) ||
      (list_1.model_id == models_.model_2 && list_2.model_id == models_.model_1);
  if (!study_pair) {
    throw ValidationError(fmt::format("lists ({}, {}) are not the study model pair",
                                      list_1.model_id, list_2.model_id));
  }
  const auto cards = [&](const RecommendationList& list) {
    if (list.episodes.empty()) {
      throw ValidationError(fmt::format("empty list for user '{}'", user_id));
    }
    std::vector<SessionEpisode> out;
    const auto n = std::min<std::size_t>(list.episodes.size(), kEpisodesPerList);
    for (std::size_t i = 0; i < n; ++i) {
      const Episode* e = corpus_.FindEpisode(list.episodes[i]);
      if (e == nullptr) {
        throw NotFoundError(fmt::format("unknown episode '{}'", list.episodes[i]));
      }
      const Show* show = corpus_.FindShow(e->show_id);
      out.push_back({e->episode_id, e->title, show != nullptr ? show->title : e->show_id,
                     e->description, e->image_url, e->audio_url});
    }
    return out;
  };

  Session s;
  s.session_id = std::move(token);
  s.user_id = user_id;
  s.profile = profile->second;
  s.seed = seed;
  s.created_at = created_at;
  const bool first_left =
      ShuffleTags(list_1.model_id, list_2.model_id, seed).tag_of_first_model == Tag::kA;
  const RecommendationList& left = first_left ? list_1 : list_2;
  const RecommendationList& right = first_left ? list_2 : list_1;
  s.left = cards(left);
  s.right = cards(right);
  s.placement = {left.model_id, right.model_id};
  return s;
}

Session AnnotationStore::CreateSession(const std::string& user_id,
                                       const RecommendationList& list_1,
                                       const RecommendationList& list_2, std::uint64_t seed) {
  std::lock_guard lock(mu_);
  if (open_by_user_.count(user_id) != 0) {
    throw ConflictError(fmt::format("user '{}' already has an open session", user_id));
  }
  std::string token;
  do {
    token = options_.token_source();
  } while (sessions_.count(token) != 0);
  Entry entry;
  entry.session = BuildSession(user_id, list_1, list_2, seed, token, options_.clock());
  Append({{"event", "session"},
          {"session_id", token},
          {"user_id", user_id},
          {"list_1", list_1.model_id},
          {"list_2", list_2.model_id},
          {"seed", seed},
          {"created_at", FormatRfc3339(entry.session.created_at)},
          {"placement",
           {{"left", entry.session.placement.left_model},
            {"right", entry.session.placement.right_model}}}});
  open_by_user_[user_id] = token;
  sessions_[token] = entry;
  return entry.session;
}

Session AnnotationStore::CreateSession(const std::string& user_id, std::uint64_t seed) {
  const auto* list_1 = corpus_.FindRecommendation(user_id, models_.model_1);
  const auto* list_2 = corpus_.FindRecommendation(user_id, models_.model_2);
  if (list_1 == nullptr || list_2 == nullptr) {
    throw NotFoundError(fmt::format("user '{}' lacks a list from each study model", user_id));
  }
  return CreateSession(user_id, *list_1, *list_2, seed);
}

Session AnnotationStore::Get(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw NotFoundError("unknown session");
  return it->second.session;
}

HumanAnnotation AnnotationStore::Resolve(const Entry& entry, const AnnotationSubmission& item,
                                         std::string* key) const {
  const Session& s = entry.session;
  HumanAnnotation a;
  a.user_id = s.user_id;
  a.kind = item.kind;
  a.session_id = s.session_id;
  a.annotated_at = options_.clock();
  switch (item.kind) {
    case AnnotationKind::kEpisodeAlignment: {
      std::optional<Side> side = item.side;
      std::string episode_id;
      if (item.position) {
        if (!side) throw ValidationError("'position' needs 'side'");
        const auto& list = *side == Side::kLeft ? s.left : s.right;
        if (*item.position < 0 || *item.position >= static_cast<int>(list.size())) {
          throw ValidationError(fmt::format("position {} out of range", *item.position));
        }
        episode_id = list[static_cast<std::size_t>(*item.position)].episode_id;
        if (item.episode_id && *item.episode_id != episode_id) {
          throw ValidationError("episode_id does not match side and position");
        }
      } else {
        if (!item.episode_id) throw ValidationError("episode rating needs an episode reference");
        episode_id = *item.episode_id;
        const auto on = [&](const std::vector<SessionEpisode>& list) {
          return std::any_of(list.begin(), list.end(),
                             [&](const SessionEpisode& e) { return e.episode_id == episode_id; });
        };
        const bool in_left = on(s.left);
        const bool in_right = on(s.right);
        if (!in_left && !in_right) {
          throw ValidationError(fmt::format("episode '{}' is not in this session", episode_id));
        }
        if (side) {
          if ((*side == Side::kLeft && !in_left) || (*side == Side::kRight && !in_right)) {
            throw ValidationError(
                fmt::format("episode '{}' is not on the {} list", episode_id, ToString(*side)));
          }
        } else if (in_left && in_right) {
          throw ValidationError(
              fmt::format("episode '{}' is on both lists; give a side", episode_id));
        } else {
          side = in_left ? Side::kLeft : Side::kRight;
        }
      }
      a.episode_id = episode_id;
      a.likert = item.likert;
      a.model_id = s.model_on(*side);
      *key = EpisodeKey(episode_id);
      break;
    }
    case AnnotationKind::kProfileAccuracy: {
      if (!item.question ||
          (*item.question != kQuestionPreferences && *item.question != kQuestionInterests)) {
        throw ValidationError("profile rating needs question 'preferences' or 'interests'");
      }
      a.likert = item.likert;
      a.question = item.question;
      *key = QuestionKey(*item.question);
      break;
    }
    case AnnotationKind::kModelPreference: {
      if (!item.comparative) throw ValidationError("preference needs a 'comparative' value");
      const auto side = ComparativeSide(*item.comparative);
      if (!side) {
        a.preference = Preference::kTie;
      } else {
        a.preference = s.model_on(*side) == models_.model_1 ? Preference::kModel1
                                                            : Preference::kModel2;
      }
      *key = std::string(kPreferenceKey);
      break;
    }
  }
  a.Validate();
  return a;
}

bool AnnotationStore::IsComplete(const Entry& entry) const {
  const Session& s = entry.session;
  const auto has = [&](const std::string& key) { return entry.annotations.count(key) != 0; };
  for (const auto* list : {&s.left, &s.right}) {
    for (const auto& e : *list) {
      if (!has(EpisodeKey(e.episode_id))) return false;
    }
  }
  return has(QuestionKey(kQuestionPreferences)) && has(QuestionKey(kQuestionInterests)) &&
         has(std::string(kPreferenceKey));
}

void AnnotationStore::Store(Entry& entry, const std::string& key, HumanAnnotation record) {
  entry.annotations[key] = std::move(record);
  if (!entry.session.completed && IsComplete(entry)) {
    entry.session.completed = true;
    open_by_user_.erase(entry.session.user_id);
  }
}

HumanAnnotation AnnotationStore::Submit(const std::string& session_id,
                                        const AnnotationSubmission& item) {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw NotFoundError("unknown session");
  Entry& entry = it->second;
  if (entry.session.completed) throw ConflictError("session is already completed");
  std::string key;
  HumanAnnotation record = Resolve(entry, item, &key);
  Append({{"event", "annotation"}, {"session_id", session_id}, {"key", key}, {"record", record}});
  Store(entry, key, record);
  return record;
}

std::vector<HumanAnnotation> AnnotationStore::Snapshot() const {
  std::vector<HumanAnnotation> out;
  {
    std::lock_guard lock(mu_);
    for (const auto& [token, entry] : sessions_) {
      for (const auto& [key, record] : entry.annotations) out.push_back(record);
    }
  }
  const auto sort_key = [](const HumanAnnotation& a) {
    return std::make_tuple(a.user_id, static_cast<int>(a.kind), a.episode_id.value_or(""),
                           a.question.value_or(""), a.annotated_at, a.session_id.value_or(""));
  };
  std::sort(out.begin(), out.end(), [&](const HumanAnnotation& a, const HumanAnnotation& b) {
    return sort_key(a) < sort_key(b);
  });
  return out;
}

std::size_t AnnotationStore::Export(const std::filesystem::path& out_path) const {
  const auto records = Snapshot();
  try {
    WriteJsonl(out_path, records);
  } catch (const std::exception& e) {
    throw DataError(fmt::format("export to '{}' failed: {}", out_path.string(), e.what()));
  }
  return records.size();
}

std::filesystem::path AnnotationStore::ResolveExportPath(const std::string& relative) const {
  if (!options_.export_dir) throw ValidationError("export over HTTP is disabled");
  const std::filesystem::path rel(relative);
  if (relative.empty() || rel.is_absolute()) {
    throw ValidationError("out_path must be a relative path");
  }
  for (const auto& part : rel) {
    if (part == "..") throw ValidationError("out_path must stay inside the export directory");
  }
  return *options_.export_dir / rel;
}

void AnnotationStore::Append(const json& event) {
  if (!options_.log_path) return;
  std::ofstream out(*options_.log_path, std::ios::app | std::ios::binary);
  out << event.dump() << '\n';
  out.flush();
  if (!out) {
    throw DataError(fmt::format("cannot append to '{}'", options_.log_path->string()));
  }
}

void AnnotationStore::Replay() {
  std::ifstream in(*options_.log_path);
  if (!in) throw DataError(fmt::format("cannot read '{}'", options_.log_path->string()));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      const json event = json::parse(line);
      const auto type = event.at("event").get<std::string>();
      const auto token = event.at("session_id").get<std::string>();
      if (type == "session") {
        const auto user = event.at("user_id").get<std::string>();
        const auto* list_1 = corpus_.FindRecommendation(user, event.at("list_1").get<std::string>());
        const auto* list_2 = corpus_.FindRecommendation(user, event.at("list_2").get<std::string>());
        if (list_1 == nullptr || list_2 == nullptr) {
          throw DataError("session lists are no longer in the corpus");
        }
        Entry entry;
        entry.session =
            BuildSession(user, *list_1, *list_2, event.at("seed").get<std::uint64_t>(), token,
                         ParseRfc3339(event.at("created_at").get<std::string>()));
        const auto& placement = event.at("placement");
        if (placement.at("left").get<std::string>() != entry.session.placement.left_model) {
          throw DataError("replayed placement differs from the logged one");
        }
        sessions_[token] = std::move(entry);
        open_by_user_[user] = token;
      } else if (type == "annotation") {
        const auto it = sessions_.find(token);
        if (it == sessions_.end()) throw DataError("annotation for an unknown session");
        Store(it->second, event.at("key").get<std::string>(),
              event.at("record").get<HumanAnnotation>());
      } else {
        throw DataError(fmt::format("unknown event '{}'", type));
      }
    } catch (const json::exception& e) {
      throw DataError(
          fmt::format("{}:{}: {}", options_.log_path->string(), line_no, e.what()));
    } catch (const Error& e) {
      throw DataError(
          fmt::format("{}:{}: {}", options_.log_path->string(), line_no, e.what()));
    }
  }
}

}  // namespace podjudge
