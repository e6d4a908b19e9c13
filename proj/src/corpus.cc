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

#include "podjudge/corpus.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "podjudge/errors.h"

namespace podjudge {

using nlohmann::json;

namespace {

template <typename T>
T Required(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) {
    throw DataError(fmt::format("missing field '{}'", key));
  }
  return j.at(key).get<T>();
}

template <typename T>
T Optional(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

std::optional<std::string> OptionalString(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

}  // namespace

void to_json(json& j, const Show& s) {
  j = json{{"show_id", s.show_id},
           {"title", s.title},
           {"description", s.description},
           {"publisher", s.publisher},
           {"topic_tags", s.topic_tags}};
}

void from_json(const json& j, Show& s) {
  s.show_id = Required<std::string>(j, "show_id");
  s.title = Required<std::string>(j, "title");
  s.description = Optional<std::string>(j, "description", "");
  s.publisher = Optional<std::string>(j, "publisher", "");
  s.topic_tags = Optional<std::vector<std::string>>(j, "topic_tags", {});
}

void to_json(json& j, const Episode& e) {
  j = json{{"episode_id", e.episode_id},
           {"show_id", e.show_id},
           {"title", e.title},
           {"description", e.description},
           {"topic_tags", e.topic_tags},
           {"duration_seconds", e.duration_seconds}};
  if (e.transcript_snippet) j["transcript_snippet"] = *e.transcript_snippet;
  if (e.image_url) j["image_url"] = *e.image_url;
  if (e.audio_url) j["audio_url"] = *e.audio_url;
}

void from_json(const json& j, Episode& e) {
  e.episode_id = Required<std::string>(j, "episode_id");
  e.show_id = Required<std::string>(j, "show_id");
  e.title = Required<std::string>(j, "title");
  e.description = Optional<std::string>(j, "description", "");
  e.transcript_snippet = OptionalString(j, "transcript_snippet");
  e.topic_tags = Optional<std::vector<std::string>>(j, "topic_tags", {});
  e.duration_seconds = Required<std::int64_t>(j, "duration_seconds");
  e.image_url = OptionalString(j, "image_url");
  e.audio_url = OptionalString(j, "audio_url");
}

void to_json(json& j, const ListeningEvent& e) {
  j = json{{"user_id", e.user_id},
           {"episode_id", e.episode_id},
           {"timestamp", FormatRfc3339(e.timestamp)},
           {"listened_seconds", e.listened_seconds}};
}

void from_json(const json& j, ListeningEvent& e) {
  e.user_id = Required<std::string>(j, "user_id");
  e.episode_id = Required<std::string>(j, "episode_id");
  e.timestamp = ParseRfc3339(Required<std::string>(j, "timestamp"));
  e.listened_seconds = Required<std::int64_t>(j, "listened_seconds");
}

void to_json(json& j, const RecommendationList& r) {
  j = json{{"model_id", r.model_id}, {"user_id", r.user_id}, {"episodes", r.episodes}};
}

void from_json(const json& j, RecommendationList& r) {
  r.model_id = Required<std::string>(j, "model_id");
  r.user_id = Required<std::string>(j, "user_id");
  r.episodes = Required<std::vector<std::string>>(j, "episodes");
}

std::string IngestReport::RejectLog() const {
  std::string out;
  for (const auto& r : rejects) out += fmt::format("{}:{}: {}\n", r.file, r.line_no, r.reason);
  return out;
}

Corpus Corpus::Ingest(const Paths& paths) {
  const auto read = [](const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("cannot read '{}'", path.string()));
    RawFile file{path.filename().string(), {}};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      file.lines.push_back({line_no, std::move(line)});
    }
    if (in.bad()) throw DataError(fmt::format("I/O error reading '{}'", path.string()));
    return file;
  };
  const RawFile shows = read(paths.shows);
  const RawFile episodes = read(paths.episodes);
  const RawFile events = read(paths.events);
  std::optional<RawFile> recs;
  if (paths.recommendations) recs = read(*paths.recommendations);
  return Build(shows, episodes, events, recs ? &*recs : nullptr);
}

Corpus Corpus::FromRecords(std::vector<Show> shows, std::vector<Episode> episodes,
                           std::vector<ListeningEvent> events,
                           std::vector<RecommendationList> recommendations) {
  const auto encode = [](const std::string& name, const auto& records) {
    RawFile file{name, {}};
    int line_no = 0;
    for (const auto& r : records) file.lines.push_back({++line_no, json(r).dump()});
    return file;
  };
  const RawFile recs = encode("recommendations.jsonl", recommendations);
  return Build(encode("shows.jsonl", shows), encode("episodes.jsonl", episodes),
               encode("events.jsonl", events), &recs);
}

Corpus Corpus::Build(const RawFile& shows, const RawFile& episodes, const RawFile& events,
                     const RawFile* recommendations) {
  Corpus corpus;
  IngestReport& report = corpus.report_;

  // Decodes each line of `file`, calling `accept(record)` which either
  // stores it or throws DataError with the reject reason.
  const auto load = [&report]<typename T>(const RawFile& file, FileCounts& counts,
                                          auto&& accept, T* /*tag*/) {
    for (const auto& line : file.lines) {
      ++counts.lines;
      std::string reason;
      try {
        if (Trim(line.text).empty()) throw DataError("empty line");
        json j;
        try {
          j = json::parse(line.text);
        } catch (const json::exception& e) {
          throw DataError("malformed JSON");
        }
        if (!j.is_object()) throw DataError("record is not a JSON object");
        T record;
        try {
          record = j.get<T>();
        } catch (const json::exception& e) {
          throw DataError(fmt::format("wrong field type ({})", e.what()));
        }
        accept(std::move(record));
        ++counts.accepted;
        continue;
      } catch (const DataError& e) {
        reason = e.what();
      }
      ++counts.rejected;
      report.rejects.push_back({file.name, line.line_no, reason});
    }
  };

  load(shows, report.shows, [&](Show s) {
    if (s.show_id.empty()) throw DataError("empty show_id");
    if (s.title.empty()) throw DataError("empty title");
    if (corpus.show_index_.contains(s.show_id)) {
      throw DataError(fmt::format("duplicate show_id '{}'", s.show_id));
    }
    corpus.show_index_.emplace(s.show_id, corpus.shows_.size());
    corpus.shows_.push_back(std::move(s));
  }, static_cast<Show*>(nullptr));

  load(episodes, report.episodes, [&](Episode e) {
    if (e.episode_id.empty()) throw DataError("empty episode_id");
    if (corpus.episode_index_.contains(e.episode_id)) {
      throw DataError(fmt::format("duplicate episode_id '{}'", e.episode_id));
    }
    if (!corpus.show_index_.contains(e.show_id)) {
      throw DataError(fmt::format("unknown show_id '{}'", e.show_id));
    }
    if (e.duration_seconds < 0) throw DataError("negative duration_seconds");
    corpus.episode_index_.emplace(e.episode_id, corpus.episodes_.size());
    corpus.episodes_.push_back(std::move(e));
  }, static_cast<Episode*>(nullptr));

  load(events, report.events, [&](ListeningEvent ev) {
    if (ev.user_id.empty()) throw DataError("empty user_id");
    const Episode* episode = corpus.FindEpisode(ev.episode_id);
    if (episode == nullptr) {
      throw DataError(fmt::format("unknown episode_id '{}'", ev.episode_id));
    }
    if (ev.listened_seconds < 0) throw DataError("negative listened_seconds");
    if (ev.listened_seconds > episode->duration_seconds) throw DataError("overlong listen");
    corpus.events_by_user_[ev.user_id].push_back(std::move(ev));
  }, static_cast<ListeningEvent*>(nullptr));

  if (recommendations != nullptr) {
    load(*recommendations, report.recommendations, [&](RecommendationList r) {
      if (r.model_id.empty()) throw DataError("empty model_id");
      if (r.user_id.empty()) throw DataError("empty user_id");
      if (r.episodes.empty()) throw DataError("empty recommendation list");
      std::unordered_set<std::string> seen;
      for (const auto& id : r.episodes) {
        if (!seen.insert(id).second) {
          throw DataError(fmt::format("duplicate episode_id '{}' in list", id));
        }
        if (corpus.FindEpisode(id) == nullptr) {
          throw DataError(fmt::format("unknown episode_id '{}'", id));
        }
      }
      if (corpus.FindRecommendation(r.user_id, r.model_id) != nullptr) {
        throw DataError(fmt::format("duplicate list for user '{}' model '{}'", r.user_id,
                                    r.model_id));
      }
      corpus.recommendations_.push_back(std::move(r));
    }, static_cast<RecommendationList*>(nullptr));
  }
  return corpus;
}

const Show* Corpus::FindShow(std::string_view show_id) const {
  const auto it = show_index_.find(std::string(show_id));
  return it == show_index_.end() ? nullptr : &shows_[it->second];
}

const Episode* Corpus::FindEpisode(std::string_view episode_id) const {
  const auto it = episode_index_.find(std::string(episode_id));
  return it == episode_index_.end() ? nullptr : &episodes_[it->second];
}

std::span<const ListeningEvent> Corpus::EventsOf(std::string_view user_id) const {
  const auto it = events_by_user_.find(std::string(user_id));
  if (it == events_by_user_.end()) return {};
  return it->second;
}

std::vector<const RecommendationList*> Corpus::RecommendationsOf(
    std::string_view user_id) const {
  std::vector<const RecommendationList*> out;
  for (const auto& r : recommendations_) {
    if (r.user_id == user_id) out.push_back(&r);
  }
  return out;
}

const RecommendationList* Corpus::FindRecommendation(std::string_view user_id,
                                                     std::string_view model_id) const {
  for (const auto& r : recommendations_) {
    if (r.user_id == user_id && r.model_id == model_id) return &r;
  }
  return nullptr;
}

std::vector<std::string> Corpus::Users() const {
  std::set<std::string> users;
  for (const auto& [user, events] : events_by_user_) users.insert(user);
  for (const auto& r : recommendations_) users.insert(r.user_id);
  return {users.begin(), users.end()};
}

std::size_t Corpus::event_count() const {
  std::size_t n = 0;
  for (const auto& [user, events] : events_by_user_) n += events.size();
  return n;
}

UserHistory WindowHistory(const Corpus& corpus, std::string_view user_id, Instant end,
                          int days) {
  if (days <= 0) throw ArgumentError(fmt::format("window days must be > 0, got {}", days));
  UserHistory history;
  history.user_id = std::string(user_id);
  history.window_end = end;
  history.window_start = end - std::chrono::days{days};
  for (const auto& ev : corpus.EventsOf(user_id)) {
    if (ev.timestamp >= history.window_start && ev.timestamp < history.window_end) {
      history.events.push_back(ev);
    }
  }
  std::stable_sort(history.events.begin(), history.events.end(),
                   [](const ListeningEvent& a, const ListeningEvent& b) {
                     return a.timestamp < b.timestamp;
                   });
  return history;
}

namespace {

struct Engagement {
  std::int64_t seconds = 0;
  Instant last_event = Instant::min();
};

// Descending seconds, then most recent event, then ascending id.
std::vector<std::pair<std::string, Engagement>> Rank(
    const std::map<std::string, Engagement>& totals) {
  std::vector<std::pair<std::string, Engagement>> ranked(totals.begin(), totals.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.seconds != b.second.seconds) return a.second.seconds > b.second.seconds;
    if (a.second.last_event != b.second.last_event) {
      return a.second.last_event > b.second.last_event;
    }
    return a.first < b.first;
  });
  return ranked;
}

}  // namespace

ProfileInput SelectProfileInput(const UserHistory& history, const Corpus& corpus,
                                int n_shows, int episode_budget) {
  if (episode_budget < 1) {
    throw ArgumentError(fmt::format("episode_budget must be >= 1, got {}", episode_budget));
  }
  if (n_shows < 0) throw ArgumentError("n_shows must be >= 0");
  if (history.events.empty()) {
    throw InsufficientHistoryError(
        fmt::format("insufficient history for user '{}'", history.user_id));
  }
  std::map<std::string, Engagement> by_episode;
  std::map<std::string, Engagement> by_show;
  for (const auto& ev : history.events) {
    const Episode* episode = corpus.FindEpisode(ev.episode_id);
    if (episode == nullptr) {
      throw DataError(fmt::format("history references unknown episode '{}'", ev.episode_id));
    }
    for (Engagement* e : {&by_episode[ev.episode_id], &by_show[episode->show_id]}) {
      e->seconds += ev.listened_seconds;
      e->last_event = std::max(e->last_event, ev.timestamp);
    }
  }

  ProfileInput input;
  input.user_id = history.user_id;
  input.episode_budget = episode_budget;
  for (const auto& [id, engagement] : Rank(by_show)) {
    if (static_cast<int>(input.top_shows.size()) >= n_shows) break;
    input.top_shows.push_back({*corpus.FindShow(id), engagement.seconds});
  }
  for (const auto& [id, engagement] : Rank(by_episode)) {
    if (static_cast<int>(input.top_episodes.size()) >= episode_budget) break;
    const Episode& episode = *corpus.FindEpisode(id);
    input.top_episodes.push_back(
        {episode, engagement.seconds, corpus.FindShow(episode.show_id)->title});
  }
  return input;
}

}  // namespace podjudge
