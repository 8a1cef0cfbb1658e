// Copyright 2026 The argpat Authors
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

// argpat: command-line driver for the argumentation pattern toolkit.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "argpat/hash.h"
#include "argpat/pipeline.h"
#include "argpat/store.h"
#include "argpat/synth.h"
#include "argpat/topics.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kFailed = 2;

struct Globals {
  std::string store = "store";
  std::string corpus;
  int workers = 1;

  fs::path dir() const { return fs::path(store) / corpus; }
};

int Fail(const absl::Status& status) {
  fmt::print(stderr, "error: {}\n", std::string(status.ToString()));
  return status.code() == absl::StatusCode::kInvalidArgument ? kInvalid
                                                             : kFailed;
}

int Done(const absl::Status& status) {
  return status.ok() ? kOk : Fail(status);
}

absl::StatusOr<argpat::NameMap> LoadNames(const std::string& path) {
  argpat::NameMap names;
  if (path.empty()) return names;
  auto text = argpat::ReadFile(path);
  if (!text.ok()) return text.status();
  auto j = nlohmann::json::parse(*text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError(
        argpat::StrCat(path, ": expected a JSON object of pattern names"));
  }
  // A pipeline config carries its names under "pattern_names".
  if (j.contains("pattern_names")) j = j["pattern_names"];
  for (const auto& [key, value] : j.items()) {
    auto id = argpat::ParseInt<int>(key);
    if (!id || *id < 1 || !value.is_string()) {
      return absl::InvalidArgumentError(
          argpat::StrCat(path, ": bad pattern name entry '", key, "'"));
    }
    names[*id - 1] = value.get<std::string>();
  }
  return names;
}

absl::Status RequireCorpus(const Globals& g) {
  if (g.corpus.empty()) {
    return absl::InvalidArgumentError("--corpus is required");
  }
  return absl::OkStatus();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Argumentation pattern mining toolkit"};
  app.set_version_flag("--version", std::string(argpat::ToolkitVersion()));
  app.require_subcommand(1);
  Globals g;
  app.add_option("--store", g.store, "Corpus store directory")
      ->capture_default_str();
  app.add_option("--corpus", g.corpus, "Corpus name inside the store");
  app.add_option("--workers", g.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::function<int()> action;

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate and store a JSONL corpus");
  std::string ingest_path;
  ingest->add_option("path", ingest_path, "JSONL file")->required();
  ingest->callback([&] {
    action = [&] {
      if (auto s = RequireCorpus(g); !s.ok()) return Fail(s);
      auto r = argpat::StageIngest(ingest_path, g.dir(), g.corpus);
      if (!r.ok()) return Fail(r.status());
      fmt::print(stderr, "stored {} documents ({} rejected) in {}\n",
                 r->corpus.size(), r->rejected.size(), g.dir().string());
      return kOk;
    };
  });

  // stats
  auto* stats = app.add_subcommand("stats", "Print corpus statistics as JSON");
  stats->callback([&] {
    action = [&] {
      if (auto s = RequireCorpus(g); !s.ok()) return Fail(s);
      auto m = argpat::ReadStoreManifest(g.dir());
      if (!m.ok()) return Fail(m.status());
      fmt::print("{}\n", argpat::CorpusStatsToJson(m->stats));
      return kOk;
    };
  });

  // phrases detect
  auto* phrases = app.add_subcommand("phrases", "Bigram detection");
  phrases->require_subcommand(1);
  auto* detect = phrases->add_subcommand("detect", "Detect seed bigrams");
  std::string seeds;
  argpat::PhraseParams phrase_params;
  detect->add_option("--seeds", seeds, "Seed lexicon")->required();
  detect->add_option("--min-count", phrase_params.min_count)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  detect->add_option("--threshold", phrase_params.threshold)
      ->capture_default_str();
  detect->add_flag("--posts-only", phrase_params.posts_only);
  detect->callback([&] {
    action = [&] {
      if (auto s = RequireCorpus(g); !s.ok()) return Fail(s);
      return Done(
          argpat::StagePhrases(g.dir(), seeds, phrase_params, g.workers));
    };
  });

  // linkage build
  auto* linkage = app.add_subcommand("linkage", "Fragment linkage network");
  linkage->require_subcommand(1);
  auto* build = linkage->add_subcommand("build", "Count and link fragments");
  argpat::LinkageParams linkage_params;
  build->add_option("--min-df", linkage_params.min_df)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  build->add_flag("--posts-only", linkage_params.posts_only);
  build->callback([&] {
    action = [&] {
      if (auto s = RequireCorpus(g); !s.ok()) return Fail(s);
      return Done(argpat::StageLinkage(g.dir(), linkage_params, g.workers));
    };
  });

  // cluster run / cluster expand / expand
  auto* cluster = app.add_subcommand("cluster", "Pattern clustering");
  cluster->require_subcommand(1);
  auto* cluster_run = cluster->add_subcommand("run", "Louvain clustering");
  argpat::ClusterParams cluster_params;
  cluster_run->add_option("--seed", cluster_params.seed)->required();
  cluster_run->add_option("--resolution", cluster_params.resolution)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cluster_run->add_option("--restarts", cluster_params.restarts)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cluster_run->callback([&] {
    action = [&] {
      if (auto s = RequireCorpus(g); !s.ok()) return Fail(s);
      if (auto s = argpat::StageCluster(g.dir(), cluster_params,
                                        argpat::files::kClusteredLexicon);
          !s.ok()) {
        return Fail(s);
      }
      return Done(argpat::StagePublishLexicon(
          g.dir(), argpat::files::kClusteredLexicon));
    };
  });

  std::string candidates;
  std::string tag = "cogproc";
  bool freeze = false;
  bool expand_posts_only = false;
  auto expand_action = [&] {
    action = [&] {
      if (auto s = RequireCorpus(g); !s.ok()) return Fail(s);
      auto provenance = argpat::ParseProvenance(tag);
      if (!provenance.ok() || *provenance == argpat::Provenance::kSeed ||
          *provenance == argpat::Provenance::kBigram) {
        return Fail(absl::InvalidArgumentError(
            "--tag must be 'cogproc' or 'external'"));
      }
      argpat::CandidateSource source{candidates, *provenance};
      argpat::LinkageParams scope;
      scope.posts_only = expand_posts_only;
      const std::string out =
          argpat::StrCat("lexicon_", argpat::ProvenanceName(*provenance),
                         ".json");
      if (auto s = argpat::StageExpand(g.dir(), source, scope, freeze,
                                       argpat::files::kLexiconJson, out,
                                       g.workers);
          !s.ok()) {
        return Fail(s);
      }
      return Done(argpat::StagePublishLexicon(g.dir(), out));
    };
  };
  auto add_expand_options = [&](CLI::App* sub) {
    sub->add_option("--candidates", candidates, "Candidate fragment list")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--tag", tag, "cogproc or external")->capture_default_str();
    sub->add_flag("--freeze-counts", freeze,
                  "Keep fragment totals from before admission");
    sub->add_flag("--posts-only", expand_posts_only);
    sub->callback(expand_action);
  };
  add_expand_options(
      cluster->add_subcommand("expand", "Admit candidate fragments"));
  add_expand_options(app.add_subcommand("expand", "Admit candidate fragments"));

  // topics fit / topics flag-meta
  auto* topics = app.add_subcommand("topics", "Topic model");
  topics->require_subcommand(1);
  auto* fit = topics->add_subcommand("fit", "Fit LDA on posts");
  argpat::TopicParams topic_params;
  double alpha = 0.0;
  std::string pronouns;
  fit->add_option("--k", topic_params.n_topics)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit->add_option("--iters", topic_params.iterations)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit->add_option("--seed", topic_params.seed)->required();
  fit->add_option("--alpha", alpha, "Default 5/K")->check(CLI::PositiveNumber);
  fit->add_option("--beta", topic_params.beta)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit->add_option("--min-df", topic_params.min_df)->capture_default_str();
  fit->add_option("--pronouns", pronouns)->check(CLI::ExistingFile);
  fit->callback([&] {
    action = [&] {
      if (auto s = RequireCorpus(g); !s.ok()) return Fail(s);
      if (alpha > 0) topic_params.alpha = alpha;
      if (!pronouns.empty()) topic_params.pronouns = pronouns;
      return Done(argpat::StageTopics(g.dir(), topic_params, g.workers));
    };
  });
  auto* flag_meta = topics->add_subcommand("flag-meta", "Exclude meta topics");
  std::string markers;
  double meta_threshold = 0.3;
  flag_meta->add_option("--markers", markers)
      ->required()
      ->check(CLI::ExistingFile);
  flag_meta->add_option("--threshold", meta_threshold)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  flag_meta->callback([&] {
    action = [&] {
      if (auto s = RequireCorpus(g); !s.ok()) return Fail(s);
      auto text = argpat::ReadFile(markers);
      if (!text.ok()) return Fail(text.status());
      return Done(argpat::StageFlagMeta(
          g.dir(), argpat::ParseWordList(*text), meta_threshold));
    };
  });

  // tag run
  auto* tagging = app.add_subcommand("tag", "Pattern tagging");
  tagging->require_subcommand(1);
  auto* tag_run = tagging->add_subcommand("run", "Tag every document");
  std::string lexicon = argpat::files::kLexiconJson;
  tag_run->add_option("--lexicon", lexicon,
                      "Lexicon JSON; relative paths resolve in the corpus "
                      "directory")
      ->capture_default_str();
  tag_run->callback([&] {
    action = [&] {
      if (auto s = RequireCorpus(g); !s.ok()) return Fail(s);
      fs::path path = lexicon;
      if (path.is_relative() && !fs::exists(g.dir() / path) &&
          fs::exists(path)) {
        path = fs::absolute(path);
      }
      return Done(argpat::StageTag(g.dir(), path, g.workers));
    };
  });

  // report efficacy / profiles / frequencies
  auto* report = app.add_subcommand("report", "Reports");
  report->require_subcommand(1);
  argpat::AnalyticsParams analytics;
  std::string names_path;
  std::string outcome = "delta";
  auto* efficacy = report->add_subcommand("efficacy", "Pattern efficacy");
  efficacy->add_option("--outcome", outcome)
      ->check(CLI::IsMember({"delta", "score"}))
      ->capture_default_str();
  efficacy->add_option("--permutations", analytics.permutations)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  efficacy->add_option("--seed", analytics.seed)->required();
  efficacy->add_option("--n-floor", analytics.n_floor)->capture_default_str();
  efficacy->add_option("--names", names_path,
                       "JSON pattern names, or a pipeline config");
  efficacy->callback([&] {
    action = [&] {
      if (auto s = RequireCorpus(g); !s.ok()) return Fail(s);
      auto names = LoadNames(names_path);
      if (!names.ok()) return Fail(names.status());
      auto o = argpat::ParseOutcome(outcome);
      if (!o.ok()) return Fail(o.status());
      return Done(argpat::StageReportEfficacy(g.dir(), *o, analytics, *names,
                                              g.workers));
    };
  });
  auto* profiles = report->add_subcommand("profiles", "User profiles and PCA");
  profiles->add_option("--min-comments", analytics.min_comments)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  profiles->add_option("--names", names_path);
  profiles->callback([&] {
    action = [&] {
      if (auto s = RequireCorpus(g); !s.ok()) return Fail(s);
      auto names = LoadNames(names_path);
      if (!names.ok()) return Fail(names.status());
      return Done(argpat::StageReportProfiles(g.dir(), analytics, *names));
    };
  });
  auto* frequencies =
      report->add_subcommand("frequencies", "Pattern frequencies");
  std::string mode = "hit_share";
  frequencies->add_option("--mode", mode)
      ->check(CLI::IsMember({"hit_share", "dominant_share"}))
      ->capture_default_str();
  frequencies->add_option("--names", names_path);
  frequencies->callback([&] {
    action = [&] {
      if (auto s = RequireCorpus(g); !s.ok()) return Fail(s);
      auto names = LoadNames(names_path);
      if (!names.ok()) return Fail(names.status());
      return Done(argpat::StageReportFrequencies(
          g.dir(),
          mode == "hit_share" ? argpat::FrequencyMode::kHitShare
                              : argpat::FrequencyMode::kDominantShare,
          *names));
    };
  });

  // validate / run
  std::string config_path;
  auto validated = [&]() -> std::optional<argpat::PipelineConfig> {
    auto check = argpat::ValidateConfig(config_path);
    if (!check.ok()) {
      fmt::print(stderr, "error: {}\n", std::string(check.status().message()));
      return std::nullopt;
    }
    for (const argpat::ConfigError& e : check->errors) {
      fmt::print(stderr, "{}: {}\n", config_path, e.ToString());
    }
    if (!check->ok()) return std::nullopt;
    return check->config;
  };
  auto* validate = app.add_subcommand("validate", "Check a pipeline config");
  validate->add_option("config", config_path)->required();
  validate->callback([&] {
    action = [&] {
      if (!validated()) return kInvalid;
      fmt::print(stderr, "{}: ok\n", config_path);
      return kOk;
    };
  });
  auto* run = app.add_subcommand("run", "Run the whole pipeline");
  bool force = false;
  run->add_option("config", config_path)->required();
  run->add_flag("--force", force, "Rerun every stage");
  run->callback([&] {
    action = [&] {
      auto config = validated();
      if (!config) return kInvalid;
      if (app.get_option("--workers")->count() > 0) config->workers = g.workers;
      if (app.get_option("--store")->count() > 0) config->store = g.store;
      auto result = argpat::RunPipeline(*config, force);
      if (!result.ok()) {
        fmt::print(stderr, "error: {}\n",
                   std::string(result.status().message()));
        return kFailed;
      }
      fmt::print(stderr, "{} stages run, {} skipped; outputs in {}\n",
                 result->executed.size(), result->skipped.size(),
                 config->workdir().string());
      return kOk;
    };
  });

  // synth
  auto* synth = app.add_subcommand("synth", "Write a planted synthetic corpus");
  argpat::SynthOptions synth_options;
  std::string synth_out;
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_options.seed)->required();
  synth->add_option("--threads", synth_options.n_threads)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--replies", synth_options.replies_per_thread)
      ->capture_default_str();
  synth->add_option("--authors", synth_options.n_authors)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--patterns", synth_options.n_patterns)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--topics", synth_options.n_topics)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_flag("--meta-topic", synth_options.meta_topic);
  synth->add_option("--delta-rate", synth_options.delta_rate,
                    "Per-pattern delta probability");
  synth->add_option("--score-mean", synth_options.score_mean,
                    "Per-pattern mean reply score");
  synth->callback([&] {
    action = [&] {
      const argpat::SynthCorpus s = argpat::GenerateCorpus(synth_options);
      const fs::path out = synth_out;
      for (const auto& [name, text] :
           {std::pair<const char*, std::string>{"corpus.jsonl", s.ToJsonl()},
            {"seeds.txt", s.seeds_text},
            {"candidates.txt", s.CandidatesText()},
            {"markers.txt", s.MarkersText()}}) {
        if (auto st = argpat::WriteFile(out / name, text); !st.ok()) {
          return Fail(st);
        }
      }
      fmt::print(stderr, "wrote {} documents to {}\n", s.corpus.size(),
                 out.string());
      return kOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }
  return action ? action() : kInvalid;
}
