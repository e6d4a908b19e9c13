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

// podjudge <subcommand> --config run.toml [--seed N] [--out DIR]

#include <csignal>
#include <cstdio>
#include <iostream>
#include <map>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "podjudge/annotation.h"
#include "podjudge/config.h"
#include "podjudge/errors.h"
#include "podjudge/jsonl.h"
#include "podjudge/pipeline.h"
#include "podjudge/server.h"

namespace {

podjudge::AnnotationServer* g_server = nullptr;

void HandleSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

std::string Timestamp() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const auto day = std::chrono::floor<std::chrono::days>(now);
  const std::chrono::year_month_day ymd(day);
  const std::chrono::hh_mm_ss hms(now - day);
  return fmt::format("{:04}{:02}{:02}T{:02}{:02}{:02}Z", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                     hms.hours().count(), hms.minutes().count(), hms.seconds().count());
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

std::unique_ptr<podjudge::AnnotationStore> MakeStore(const podjudge::RunConfig& config,
                                                     podjudge::Pipeline& pipeline) {
  std::map<std::string, podjudge::UserProfile> profiles;
  const auto path = pipeline.run_dir() / podjudge::artifacts::kProfiles;
  if (std::filesystem::exists(path)) {
    for (auto& p : podjudge::ReadJsonl<podjudge::UserProfile>(path)) {
      profiles.emplace(p.user_id, std::move(p));
    }
  }
  podjudge::AnnotationStore::Options options;
  options.log_path = config.annotation_log.value_or(pipeline.run_dir() / "annotation_log.jsonl");
  options.export_dir = config.export_dir.value_or(pipeline.run_dir());
  return std::make_unique<podjudge::AnnotationStore>(pipeline.corpus(), std::move(profiles),
                                                     pipeline.models(), options);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline LLM-as-judge evaluation of podcast recommendations"};
  app.require_subcommand(1);
  Common common;
  std::vector<int> budgets;
  std::string listen;

  const auto add_common = [&](CLI::App* sub, bool out_required) {
    sub->add_option("--config", common.config, "run.toml")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "override run.master_seed");
    auto* out = sub->add_option("--out", common.out, "run directory");
    if (out_required) out->required();
    return sub;
  };
  add_common(app.add_subcommand("run", "every stage, then the manifest"), false);
  add_common(app.add_subcommand("ingest", "validate the corpus"), true);
  add_common(app.add_subcommand("profile", "generate user profiles"), true);
  add_common(app.add_subcommand("judge", "LLM judge variants"), true);
  add_common(app.add_subcommand("baseline", "embedding similarity variant"), true);
  add_common(app.add_subcommand("report", "agreement reports"), true);
  add_common(app.add_subcommand("ablate", "profile length ablation"), true)
      ->add_option("--budgets", budgets, "episode budgets (default from config)");
  add_common(app.add_subcommand("serve", "annotation study server"), true)
      ->add_option("--listen", listen, "addr:port (default from config, 127.0.0.1:8080)");
  add_common(app.add_subcommand("export", "write annotations.jsonl"), true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    auto config = podjudge::LoadConfig(common.config);
    if (common.seed) config.master_seed = *common.seed;
    std::filesystem::path run_dir =
        common.out.empty() ? config.out_dir / ("run-" + Timestamp())
                          : std::filesystem::path(common.out);
    podjudge::Pipeline pipeline(config, run_dir);

    if (name == "run") {
      pipeline.Run();
      fmt::print("run directory: {}\n", run_dir.string());
      if (!pipeline.skipped_users().empty()) {
        fmt::print("skipped users (no history in window): {}\n",
                   podjudge::Join(pipeline.skipped_users(), ", "));
      }
      const auto table = run_dir / podjudge::artifacts::kReportsTable;
      if (std::filesystem::exists(table)) fmt::print("{}", podjudge::ReadFile(table));
    } else if (name == "ingest") {
      const auto r = pipeline.Ingest();
      fmt::print("shows {}/{} episodes {}/{} events {}/{} recommendations {}/{} accepted\n",
                 r.shows.accepted, r.shows.lines, r.episodes.accepted, r.episodes.lines,
                 r.events.accepted, r.events.lines, r.recommendations.accepted,
                 r.recommendations.lines);
      if (!r.rejects.empty()) std::cerr << r.RejectLog();
    } else if (name == "profile") {
      fmt::print("{} profiles\n", pipeline.Profile().size());
    } else if (name == "judge") {
      pipeline.Judge();
    } else if (name == "baseline") {
      pipeline.Baseline();
    } else if (name == "report") {
      const auto reports = pipeline.Report();
      fmt::print("{}", podjudge::ReportsTable(reports));
    } else if (name == "ablate") {
      const auto rows = budgets.empty() ? pipeline.Ablate() : pipeline.Ablate(budgets);
      fmt::print("{}", podjudge::AblationMarkdown(rows));
    } else if (name == "serve") {
      auto store = MakeStore(config, pipeline);
      podjudge::AnnotationServer server(*store, config.static_dir);
      const auto address = podjudge::ParseListenAddress(listen.empty() ? config.listen : listen);
      g_server = &server;
      std::signal(SIGINT, HandleSignal);
      std::signal(SIGTERM, HandleSignal);
      fmt::print("listening on {}:{}\n", address.host, address.port);
      std::fflush(stdout);
      server.Listen(address);
      g_server = nullptr;
    } else if (name == "export") {
      auto store = MakeStore(config, pipeline);
      const auto count = store->Export(run_dir / podjudge::artifacts::kAnnotations);
      fmt::print("{} annotations\n", count);
    }
  } catch (const std::exception& e) {
    std::cerr << "podjudge " << name << ": " << e.what() << '\n';
    return podjudge::ExitCodeFor(e);
  }
  return 0;
}
