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

// Writes the bundled synthetic corpus: 15 single-topic shows, 20 users with
// six ranked interests each, two recommendation models, and human
// annotations. Human "aligned" ratings go only to episodes on a user's
// in-window interests, so a judge that matches topics against a profile can
// only gain accuracy as the profile covers more episodes.
//
// make_synthetic_corpus --out data/synthetic [--seed 20260601]

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <random>
#include <set>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "podjudge/corpus.h"
#include "podjudge/jsonl.h"
#include "podjudge/metrics.h"

namespace {

using podjudge::Episode;
using podjudge::HumanAnnotation;
using podjudge::Instant;
using podjudge::ListeningEvent;
using podjudge::RecommendationList;
using podjudge::Show;

struct Topic {
  std::string tag;
  std::string show_title;
  std::string publisher;
  std::array<std::string, 6> subjects;
};

// Tags are chosen so none is a substring of another or of the fixed
// wording the offline mock puts into profiles.
const std::vector<Topic>& Topics() {
  static const std::vector<Topic> topics = {
      {"astronomy", "Astronomy After Dark", "Skyline Audio",
       {"exoplanet surveys", "dark matter maps", "lunar missions", "comet tails",
        "radio telescopes", "the life of stars"}},
      {"true crime", "True Crime Ledger", "Casefile Media",
       {"a cold case reopened", "forensic accounting", "a jury that split",
        "witness memory", "a vanished heiress", "interrogation tactics"}},
      {"gardening", "The Gardening Shed", "Green Thumb Radio",
       {"winter composting", "heirloom tomatoes", "pruning roses", "soil microbes",
        "seed saving", "balcony planters"}},
      {"economics", "Economics Explained", "Ledger House",
       {"inflation expectations", "housing supply", "central bank independence",
        "trade deficits", "labour markets", "the price of eggs"}},
      {"football", "Football Tactics Weekly", "Touchline Network",
       {"the high press", "set-piece design", "youth academies", "transfer windows",
        "goalkeeper distribution", "derby day"}},
      {"jazz", "Jazz Standards Club", "Blue Room Audio",
       {"bebop phrasing", "modal records", "big band arrangements", "the walking bass",
        "vocal scat", "a forgotten trumpeter"}},
      {"cooking", "Cooking With Fire", "Kitchen Table Media",
       {"fermented hot sauce", "cast iron care", "weeknight noodles", "sourdough starters",
        "knife skills", "braising"}},
      {"parenting", "Parenting Without Panic", "Family Room Audio",
       {"toddler sleep", "screen time rules", "sibling rivalry", "teen independence",
        "school mornings", "picky eaters"}},
      {"meditation", "Meditation Minutes", "Quiet Hour Studio",
       {"breath counting", "body scans", "walking practice", "loving kindness",
        "restless minds", "silent retreats"}},
      {"startups", "Startups Unfiltered", "Founders Audio",
       {"seed rounds", "pricing experiments", "first hires", "pivot stories",
        "burn rate", "enterprise sales"}},
      {"archaeology", "Archaeology Dig Diaries", "Trowel Media",
       {"bronze age hoards", "shipwreck surveys", "ancient grain stores", "cave paintings",
        "lidar in the jungle", "carbon dating"}},
      {"comedy", "Comedy Writers Room", "Open Mic Audio",
       {"joke structure", "sitcom pilots", "improv warmups", "roast etiquette",
        "sketch pacing", "late-night monologues"}},
      {"chess", "Chess Openings Lab", "Sixty Four Media",
       {"the Sicilian defence", "endgame technique", "blitz psychology",
        "engine preparation", "famous blunders", "correspondence play"}},
      {"cycling", "Cycling Road Notes", "Peloton Audio",
       {"mountain stages", "bike fitting", "gravel racing", "commuter safety",
        "wheel building", "the spring classics"}},
      {"poetry", "Poetry Out Loud", "Stanza House",
       {"sonnet forms", "spoken word nights", "translation choices", "the haiku tradition",
        "free verse", "elegies"}},
  };
  return topics;
}

constexpr int kEpisodesPerShow = 8;
constexpr int kUsers = 20;
constexpr int kInterests = 6;
// Episodes listened per interest rank; ranks with more seconds come first.
constexpr std::array<int, kInterests> kListensPerRank = {4, 4, 4, 3, 3, 3};
const char* const kModelAlpha = "rec-alpha";
const char* const kModelBeta = "rec-beta";

// Portable draws: mt19937_64 output is fixed by the standard, the
// <random> distributions are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t Below(std::uint64_t n) { return gen_() % n; }
  bool Chance(int percent) { return Below(100) < static_cast<std::uint64_t>(percent); }
  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[Below(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

std::string EpisodeId(std::size_t topic, int n) { return fmt::format("ep-{:02}-{}", topic, n); }

Instant Days(Instant as_of, int days_before, int minute) {
  return as_of - std::chrono::hours(24 * days_before) + std::chrono::minutes(minute);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic evaluation corpus"};
  std::string out_dir;
  std::uint64_t seed = 20260601;
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--seed", seed, "generator seed");
  CLI11_PARSE(app, argc, argv);

  const std::filesystem::path out(out_dir);
  std::filesystem::create_directories(out);
  const Instant as_of = podjudge::ParseRfc3339("2026-06-01T00:00:00Z");
  Rng rng(seed);
  const auto& topics = Topics();

  std::vector<Show> shows;
  std::vector<Episode> episodes;
  for (std::size_t t = 0; t < topics.size(); ++t) {
    const Topic& topic = topics[t];
    shows.push_back({fmt::format("show-{:02}", t), topic.show_title,
                     fmt::format("{} on {}, one subject at a time.", topic.show_title, topic.tag),
                     topic.publisher, {topic.tag}});
    for (int n = 0; n < kEpisodesPerShow; ++n) {
      const auto& a = topic.subjects[static_cast<std::size_t>(n) % topic.subjects.size()];
      const auto& b = topic.subjects[static_cast<std::size_t>(n + 2) % topic.subjects.size()];
      Episode e;
      e.episode_id = EpisodeId(t, n);
      e.show_id = shows.back().show_id;
      e.title = fmt::format("{} #{}: {}", topic.show_title, n + 1, a);
      e.description = fmt::format(
          "This week on {}: {}, and how it connects to {}. Filed under {}.",
          topic.show_title, a, b, topic.tag);
      if (n % 2 == 0) {
        e.transcript_snippet =
            fmt::format("Welcome back. Today we are talking about {} and {}.", a, b);
      }
      e.topic_tags = {topic.tag};
      e.duration_seconds = 1200 + 300 * static_cast<std::int64_t>((n * 7 + t) % 9);
      e.image_url = fmt::format("https://media.example.org/covers/{}.jpg", e.episode_id);
      e.audio_url = fmt::format("https://media.example.org/clips/{}.mp3", e.episode_id);
      episodes.push_back(std::move(e));
    }
  }
  const auto duration_of = [&](const std::string& id) {
    return std::find_if(episodes.begin(), episodes.end(),
                        [&](const Episode& e) { return e.episode_id == id; })
        ->duration_seconds;
  };

  std::vector<ListeningEvent> events;
  std::vector<RecommendationList> lists;
  std::vector<HumanAnnotation> annotations;
  for (int u = 0; u < kUsers; ++u) {
    const std::string user = fmt::format("user-{:02}", u + 1);
    std::vector<std::size_t> order(topics.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.Shuffle(order);
    const std::vector<std::size_t> interests(order.begin(), order.begin() + kInterests);
    const std::size_t old_topic = order[kInterests];  // listened to, but before the window
    const std::vector<std::size_t> others(order.begin() + kInterests + 1, order.end());

    std::vector<std::vector<int>> listened(topics.size());
    for (int r = 0; r < kInterests; ++r) {
      const std::size_t t = interests[static_cast<std::size_t>(r)];
      std::vector<int> ns(kEpisodesPerShow);
      for (int n = 0; n < kEpisodesPerShow; ++n) ns[static_cast<std::size_t>(n)] = n;
      rng.Shuffle(ns);
      for (int i = 0; i < kListensPerRank[static_cast<std::size_t>(r)]; ++i) {
        const int n = ns[static_cast<std::size_t>(i)];
        listened[t].push_back(n);
        const auto id = EpisodeId(t, n);
        const auto duration = duration_of(id);
        // Higher-ranked interests get strictly more seconds per episode.
        const std::int64_t seconds = std::min<std::int64_t>(
            duration, 1100 - 150 * r + static_cast<std::int64_t>(rng.Below(100)));
        const int day = 2 + static_cast<int>(rng.Below(80));
        if (rng.Chance(30)) {
          // Split into two sessions.
          events.push_back({user, id, Days(as_of, day + 3, 60 * 19), seconds / 2});
          events.push_back({user, id, Days(as_of, day, 60 * 20), seconds - seconds / 2});
        } else {
          events.push_back({user, id, Days(as_of, day, 60 * 8 + static_cast<int>(rng.Below(600))),
                            seconds});
        }
      }
    }
    for (int i = 0; i < 3; ++i) {
      const auto id = EpisodeId(old_topic, i);
      events.push_back({user, id, Days(as_of, 120 + 10 * i, 60 * 7), duration_of(id)});
    }

    // Candidate pools: unheard on-interest episodes and off-interest ones.
    std::vector<std::string> on_pool;
    for (const std::size_t t : interests) {
      for (int n = 0; n < kEpisodesPerShow; ++n) {
        const auto& heard = listened[t];
        if (std::find(heard.begin(), heard.end(), n) == heard.end()) {
          on_pool.push_back(EpisodeId(t, n));
        }
      }
    }
    std::vector<std::string> off_pool;
    for (const std::size_t t : others) {
      for (int n = 0; n < kEpisodesPerShow; ++n) off_pool.push_back(EpisodeId(t, n));
    }
    for (int n = 3; n < kEpisodesPerShow; ++n) off_pool.push_back(EpisodeId(old_topic, n));
    rng.Shuffle(on_pool);
    rng.Shuffle(off_pool);
    std::size_t on_next = 0;
    std::size_t off_next = 0;
    std::set<std::string> used;
    const auto draw = [&](bool on_interest) {
      auto& pool = on_interest ? on_pool : off_pool;
      auto& next = on_interest ? on_next : off_next;
      while (used.count(pool[next]) != 0) ++next;
      used.insert(pool[next]);
      return pool[next++];
    };
    // rec-alpha is the stronger recommender.
    const auto make_list = [&](const char* model, int on_percent) {
      RecommendationList list{model, user, {}};
      for (int i = 0; i < 5; ++i) list.episodes.push_back(draw(rng.Chance(on_percent)));
      return list;
    };
    lists.push_back(make_list(kModelAlpha, 60));
    lists.push_back(make_list(kModelBeta, 50));
    const RecommendationList& alpha = lists[lists.size() - 2];
    const RecommendationList& beta = lists.back();

    const auto topic_of = [](const std::string& id) {
      return static_cast<std::size_t>(std::stoi(id.substr(3, 2)));
    };
    const auto on_interest = [&](const std::string& id) {
      return std::find(interests.begin(), interests.end(), topic_of(id)) != interests.end();
    };
    int minute = 0;
    const auto stamp = [&] { return Days(as_of, -2, 10 * 60 + (minute++)); };
    int on_alpha = 0;
    int on_beta = 0;
    for (const auto* list : {&alpha, &beta}) {
      for (int i = 0; i < 3; ++i) {
        const auto& id = list->episodes[static_cast<std::size_t>(i)];
        int likert;
        if (on_interest(id)) {
          likert = rng.Chance(50) ? 5 : 4;
          (list == &alpha ? on_alpha : on_beta)++;
        } else if (topic_of(id) == old_topic) {
          likert = rng.Chance(50) ? 4 : 3;
        } else {
          const auto roll = rng.Below(100);
          likert = roll < 30 ? 1 : roll < 60 ? 2 : roll < 90 ? 3 : 4;
        }
        HumanAnnotation a;
        a.user_id = user;
        a.kind = podjudge::AnnotationKind::kEpisodeAlignment;
        a.episode_id = id;
        a.likert = likert;
        a.annotated_at = stamp();
        a.model_id = list->model_id;
        annotations.push_back(a);
      }
    }
    for (const auto question : {"preferences", "interests"}) {
      HumanAnnotation a;
      a.user_id = user;
      a.kind = podjudge::AnnotationKind::kProfileAccuracy;
      a.likert = 3 + static_cast<int>(rng.Below(3));
      a.question = question;
      a.annotated_at = stamp();
      annotations.push_back(a);
    }
    HumanAnnotation pref;
    pref.user_id = user;
    pref.kind = podjudge::AnnotationKind::kModelPreference;
    pref.annotated_at = stamp();
    if (on_alpha == on_beta || (std::abs(on_alpha - on_beta) == 1 && rng.Chance(25))) {
      pref.preference = podjudge::Preference::kTie;
    } else {
      pref.preference =
          on_alpha > on_beta ? podjudge::Preference::kModel1 : podjudge::Preference::kModel2;
    }
    annotations.push_back(pref);
  }

  std::sort(events.begin(), events.end(), [](const ListeningEvent& a, const ListeningEvent& b) {
    return std::tie(a.user_id, a.timestamp, a.episode_id) <
           std::tie(b.user_id, b.timestamp, b.episode_id);
  });

  podjudge::WriteJsonl(out / "shows.jsonl", shows);
  podjudge::WriteJsonl(out / "episodes.jsonl", episodes);
  // A few deliberately bad records so ingestion's reject path is exercised.
  std::string event_text = podjudge::ToJsonl(std::span<const ListeningEvent>(events));
  event_text += "{\"user_id\": \"user-01\", \"episode_id\": \"ep-99-0\", "
                "\"timestamp\": \"2026-05-01T10:00:00Z\", \"listened_seconds\": 60}\n";
  event_text += "{not json\n";
  event_text += "{\"user_id\": \"user-02\", \"episode_id\": \"ep-00-0\", "
                "\"timestamp\": \"2026-05-02T10:00:00Z\", \"listened_seconds\": 999999}\n";
  podjudge::WriteFileAtomic(out / "events.jsonl", event_text);
  podjudge::WriteJsonl(out / "recommendations.jsonl", lists);
  podjudge::WriteJsonl(out / "annotations.jsonl", annotations);
  fmt::print("{} shows, {} episodes, {} events (+3 bad), {} lists, {} annotations\n",
             shows.size(), episodes.size(), events.size(), lists.size(), annotations.size());
  return 0;
}
