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

// Catalog, listening events, and recommendation lists: ingestion,
// validation, recency windowing, and selection of the profile inputs.

#ifndef PODJUDGE_CORPUS_H_
#define PODJUDGE_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "podjudge/util.h"

namespace podjudge {

struct Show {
  std::string show_id;
  std::string title;
  std::string description;
  std::string publisher;
  std::vector<std::string> topic_tags;
};

struct Episode {
  std::string episode_id;
  std::string show_id;
  std::string title;
  std::string description;
  std::optional<std::string> transcript_snippet;
  std::vector<std::string> topic_tags;
  std::int64_t duration_seconds = 0;
  // Pass-through media links shown to annotators.
  std::optional<std::string> image_url;
  std::optional<std::string> audio_url;
};

struct ListeningEvent {
  std::string user_id;
  std::string episode_id;
  Instant timestamp;
  std::int64_t listened_seconds = 0;
};

// Events of one user inside [window_start, window_end), ascending by time.
struct UserHistory {
  std::string user_id;
  Instant window_start;
  Instant window_end;
  std::vector<ListeningEvent> events;
};

struct RankedShow {
  Show show;
  std::int64_t total_listened_seconds = 0;
};

struct RankedEpisode {
  Episode episode;
  std::int64_t total_listened_seconds = 0;
  std::string show_title;
};

struct ProfileInput {
  std::string user_id;
  std::vector<RankedShow> top_shows;
  std::vector<RankedEpisode> top_episodes;
  int episode_budget = 0;
};

struct RecommendationList {
  std::string model_id;
  std::string user_id;
  std::vector<std::string> episodes;  // index 0 = top rank
};

void to_json(nlohmann::json& j, const Show& s);
void from_json(const nlohmann::json& j, Show& s);
void to_json(nlohmann::json& j, const Episode& e);
void from_json(const nlohmann::json& j, Episode& e);
void to_json(nlohmann::json& j, const ListeningEvent& e);
void from_json(const nlohmann::json& j, ListeningEvent& e);
void to_json(nlohmann::json& j, const RecommendationList& r);
void from_json(const nlohmann::json& j, RecommendationList& r);

struct RejectedRecord {
  std::string file;
  int line_no = 0;
  std::string reason;
};

struct FileCounts {
  int lines = 0;
  int accepted = 0;
  int rejected = 0;
};

struct IngestReport {
  FileCounts shows;
  FileCounts episodes;
  FileCounts events;
  FileCounts recommendations;
  std::vector<RejectedRecord> rejects;

  // `FILE:LINE_NO: reason`, one per line.
  std::string RejectLog() const;
};

// Immutable, validated, in-memory corpus. Safe for concurrent readers.
class Corpus {
 public:
  struct Paths {
    std::filesystem::path shows;
    std::filesystem::path episodes;
    std::filesystem::path events;
    std::optional<std::filesystem::path> recommendations;
  };

  // Reads line-delimited JSON. An unreadable file throws DataError; bad
  // lines are rejected and reported, ingestion continues.
  static Corpus Ingest(const Paths& paths);

  // Same validation as Ingest over already-decoded records. Line numbers in
  // the report are 1-based record indices.
  static Corpus FromRecords(std::vector<Show> shows, std::vector<Episode> episodes,
                            std::vector<ListeningEvent> events,
                            std::vector<RecommendationList> recommendations = {});

  const Show* FindShow(std::string_view show_id) const;
  const Episode* FindEpisode(std::string_view episode_id) const;

  // Accepted events of one user in file order; empty for unknown users.
  std::span<const ListeningEvent> EventsOf(std::string_view user_id) const;

  // Lists recommended to `user_id`, in file order.
  std::vector<const RecommendationList*> RecommendationsOf(std::string_view user_id) const;
  const RecommendationList* FindRecommendation(std::string_view user_id,
                                               std::string_view model_id) const;

  // Sorted ids of users with at least one event or recommendation.
  std::vector<std::string> Users() const;

  const std::vector<Show>& shows() const { return shows_; }
  const std::vector<Episode>& episodes() const { return episodes_; }
  const std::vector<RecommendationList>& recommendations() const { return recommendations_; }
  std::size_t event_count() const;
  const IngestReport& report() const { return report_; }

 private:
  struct RawLine {
    int line_no;
    std::string text;
  };
  struct RawFile {
    std::string name;
    std::vector<RawLine> lines;
  };
  static Corpus Build(const RawFile& shows, const RawFile& episodes, const RawFile& events,
                      const RawFile* recommendations);

  std::vector<Show> shows_;
  std::vector<Episode> episodes_;
  std::vector<RecommendationList> recommendations_;
  std::unordered_map<std::string, std::size_t> show_index_;
  std::unordered_map<std::string, std::size_t> episode_index_;
  std::unordered_map<std::string, std::vector<ListeningEvent>> events_by_user_;
  IngestReport report_;
};

inline constexpr int kDefaultWindowDays = 90;

// Events with end - days*24h <= t < end, ascending by timestamp (stable for
// equal timestamps). Unknown users yield an empty history.
UserHistory WindowHistory(const Corpus& corpus, std::string_view user_id, Instant end,
                          int days = kDefaultWindowDays);

inline constexpr int kDefaultTopShows = 10;
inline constexpr int kDefaultEpisodeBudget = 20;

// Ranks shows and episodes by total listened seconds; ties go to the item
// with the most recent event, then to the lexicographically smaller id.
// Throws InsufficientHistoryError for an empty history.
ProfileInput SelectProfileInput(const UserHistory& history, const Corpus& corpus,
                                int n_shows = kDefaultTopShows,
                                int episode_budget = kDefaultEpisodeBudget);

}  // namespace podjudge

#endif  // PODJUDGE_CORPUS_H_
