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

// Blinded side-by-side survey sessions. The store keeps the left/right
// placement server-side, translates side-relative answers into
// model-relative HumanAnnotation records, and persists every accepted
// change to an append-only log that is replayed on startup.

#ifndef PODJUDGE_ANNOTATION_H_
#define PODJUDGE_ANNOTATION_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "podjudge/corpus.h"
#include "podjudge/metrics.h"
#include "podjudge/profiler.h"

namespace podjudge {

enum class Side { kLeft, kRight };

std::string_view ToString(Side side);
Side ParseSide(std::string_view s);

// Profile questions shown above the lists.
inline constexpr std::string_view kQuestionPreferences = "preferences";
inline constexpr std::string_view kQuestionInterests = "interests";

inline constexpr int kEpisodesPerList = 3;

// Client-safe episode card.
struct SessionEpisode {
  std::string episode_id;
  std::string title;
  std::string show_name;
  std::string description;
  std::optional<std::string> image_url;
  std::optional<std::string> audio_url;
};

// Server-side only.
struct Placement {
  std::string left_model;
  std::string right_model;
};

struct Session {
  std::string session_id;
  std::string user_id;
  UserProfile profile;
  std::vector<SessionEpisode> left;
  std::vector<SessionEpisode> right;
  Placement placement;
  std::uint64_t seed = 0;
  Instant created_at{};
  bool completed = false;

  const std::string& model_on(Side side) const {
    return side == Side::kLeft ? placement.left_model : placement.right_model;
  }
};

// Payload for the browser: profile, both lists, questions, completion
// state. Never contains the placement or any model id.
nlohmann::json ClientPayload(const Session& session);

struct AnnotationSubmission {
  AnnotationKind kind = AnnotationKind::kEpisodeAlignment;
  // Episode reference: an id, or a side plus 0-based position.
  std::optional<std::string> episode_id;
  std::optional<Side> side;
  std::optional<int> position;
  std::optional<int> likert;
  std::optional<std::string> question;
  // 1 = left much better ... 3 = no difference ... 5 = right much better.
  std::optional<int> comparative;
};

// ValidationError for malformed bodies.
AnnotationSubmission ParseSubmission(const nlohmann::json& body);

// {1,2} -> left, 3 -> none (tie), {4,5} -> right.
std::optional<Side> ComparativeSide(int comparative);

class AnnotationStore {
 public:
  struct Options {
    // Append-only event log; replayed by the constructor when present.
    std::optional<std::filesystem::path> log_path;
    // Export targets sent over HTTP are resolved inside this directory.
    std::optional<std::filesystem::path> export_dir;
    std::function<Instant()> clock;
    std::function<std::string()> token_source;
  };

  // `corpus` must outlive the store. `models` fixes which list model is
  // model_1 in stored preferences.
  AnnotationStore(const Corpus& corpus, std::map<std::string, UserProfile> profiles,
                  ModelPair models, Options options);
  AnnotationStore(const Corpus& corpus, std::map<std::string, UserProfile> profiles,
                  ModelPair models);

  // NotFoundError without a profile; ValidationError for lists of another
  // user, equal models, or models outside the study pair; ConflictError
  // when the user already has an open session.
  Session CreateSession(const std::string& user_id, const RecommendationList& list_1,
                        const RecommendationList& list_2, std::uint64_t seed);
  // Looks up the study pair's lists for the user in the corpus.
  Session CreateSession(const std::string& user_id, std::uint64_t seed);

  // NotFoundError for unknown tokens.
  Session Get(const std::string& session_id) const;

  // NotFoundError, ValidationError, or ConflictError (completed session).
  HumanAnnotation Submit(const std::string& session_id, const AnnotationSubmission& item);

  // Every stored annotation, sorted for deterministic export.
  std::vector<HumanAnnotation> Snapshot() const;
  std::size_t Export(const std::filesystem::path& out_path) const;
  // Resolves `relative` inside export_dir; ValidationError if it escapes.
  std::filesystem::path ResolveExportPath(const std::string& relative) const;

  const ModelPair& models() const { return models_; }

 private:
  struct Entry {
    Session session;
    // Last-write-wins key -> record.
    std::map<std::string, HumanAnnotation> annotations;
  };

  Session BuildSession(const std::string& user_id, const RecommendationList& list_1,
                       const RecommendationList& list_2, std::uint64_t seed,
                       std::string token, Instant created_at) const;
  HumanAnnotation Resolve(const Entry& entry, const AnnotationSubmission& item,
                          std::string* key) const;
  void Store(Entry& entry, const std::string& key, HumanAnnotation record);
  bool IsComplete(const Entry& entry) const;
  void Append(const nlohmann::json& event);
  void Replay();

  const Corpus& corpus_;
  std::map<std::string, UserProfile> profiles_;
  ModelPair models_;
  Options options_;
  mutable std::mutex mu_;
  std::map<std::string, Entry> sessions_;
  std::map<std::string, std::string> open_by_user_;
};

// 128 random bits, base64url without padding.
std::string NewSessionToken();

}  // namespace podjudge

#endif  // PODJUDGE_ANNOTATION_H_
