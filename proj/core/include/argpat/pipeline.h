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

#ifndef ARGPAT_PIPELINE_H_
#define ARGPAT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "argpat/analytics.h"
#include "argpat/communities.h"
#include "argpat/corpus.h"
#include "argpat/reports.h"
#include "argpat/tagging.h"

namespace argpat {

// Files inside a corpus working directory (<store>/<corpus name>/).
namespace files {
inline constexpr char kFragments[] = "fragments.tsv";
inline constexpr char kCounts[] = "counts.tsv";
inline constexpr char kNetwork[] = "network.tsv";
inline constexpr char kNetworkNodes[] = "network_nodes.txt";
inline constexpr char kClusteredLexicon[] = "lexicon_clustered.json";
inline constexpr char kLexiconJson[] = "lexicon.json";
inline constexpr char kLexiconCsv[] = "lexicon.csv";
inline constexpr char kTopicModel[] = "topic_model.json";
inline constexpr char kDocTopics[] = "doc_topics.csv";
inline constexpr char kMetaTopics[] = "meta_topics.csv";
inline constexpr char kTags[] = "tags.csv";
inline constexpr char kReports[] = "reports";
inline constexpr char kRunManifest[] = "run_manifest.json";
inline constexpr char kRunTimings[] = "run_timings.json";
}  // namespace files

struct PhraseParams {
  uint64_t min_count = 25;
  double threshold = 10.0;
  bool posts_only = false;
};

struct LinkageParams {
  uint32_t min_df = 50;
  bool posts_only = false;
};

struct ClusterParams {
  uint64_t seed = 0;
  double resolution = 1.0;
  int restarts = 64;
};

struct CandidateSource {
  std::filesystem::path path;
  Provenance tag = Provenance::kCogproc;
};

struct TopicParams {
  int n_topics = 25;
  std::optional<double> alpha;
  double beta = 0.01;
  int iterations = 1000;
  uint64_t seed = 0;
  uint32_t min_df = 5;
  std::optional<std::filesystem::path> pronouns;
  std::optional<std::filesystem::path> markers;
  double meta_threshold = 0.3;
};

struct AnalyticsParams {
  size_t min_comments = 20;
  int permutations = 10000;
  uint64_t seed = 0;
  size_t n_floor = 200;
};

// Stage functions. Each reads its inputs from and writes its outputs to
// the working directory `dir`; the CLI subcommands and RunPipeline share
// them.
absl::StatusOr<IngestResult> StageIngest(const std::filesystem::path& input,
                                         const std::filesystem::path& dir,
                                         std::string_view name);
absl::Status StagePhrases(const std::filesystem::path& dir,
                          const std::filesystem::path& seeds,
                          const PhraseParams& params, int workers);
absl::Status StageLinkage(const std::filesystem::path& dir,
                          const LinkageParams& params, int workers);
absl::Status StageCluster(const std::filesystem::path& dir,
                          const ClusterParams& params,
                          std::string_view out_lexicon);
absl::Status StageExpand(const std::filesystem::path& dir,
                         const CandidateSource& source,
                         const LinkageParams& scope, bool freeze_counts,
                         std::string_view in_lexicon,
                         std::string_view out_lexicon, int workers);
// Copies a lexicon to lexicon.json and writes lexicon.csv.
absl::Status StagePublishLexicon(const std::filesystem::path& dir,
                                 std::string_view lexicon);
absl::Status StageTopics(const std::filesystem::path& dir,
                         const TopicParams& params, int workers);
// Scores topics against the marker list and excludes every thread whose
// post is dominated by a flagged topic.
absl::Status StageFlagMeta(const std::filesystem::path& dir,
                           const std::vector<std::string>& markers,
                           double threshold);
absl::Status StageTag(const std::filesystem::path& dir,
                      const std::filesystem::path& lexicon, int workers);
absl::Status StageReportFrequencies(const std::filesystem::path& dir,
                                    FrequencyMode mode, const NameMap& names);
absl::Status StageReportEfficacy(const std::filesystem::path& dir,
                                 Outcome outcome,
                                 const AnalyticsParams& params,
                                 const NameMap& names, int workers);
absl::Status StageReportProfiles(const std::filesystem::path& dir,
                                 const AnalyticsParams& params,
                                 const NameMap& names);

struct PipelineConfig {
  std::filesystem::path base_dir;  // Relative paths resolve against this.
  std::string corpus_name;
  std::filesystem::path corpus_path;
  std::filesystem::path store;
  std::filesystem::path seeds;
  std::vector<CandidateSource> candidates;
  PhraseParams phrases;
  LinkageParams linkage;
  ClusterParams cluster;
  bool freeze_counts = false;
  TopicParams topics;
  FrequencyMode frequency_mode = FrequencyMode::kHitShare;
  AnalyticsParams analytics;
  NameMap pattern_names;  // Keyed by 0-based pattern id.
  int workers = 1;
  std::string canonical_json;

  std::filesystem::path workdir() const { return store / corpus_name; }
};

struct ConfigError {
  std::string field;  // Dotted path, e.g. "linkage.min_df".
  std::string message;

  std::string ToString() const { return StrCat(field, ": ", message); }
};

struct ConfigCheck {
  PipelineConfig config;
  std::vector<ConfigError> errors;

  bool ok() const { return errors.empty(); }
};

// JSON config. Fails only when the file cannot be read or parsed; every
// other problem is listed in ConfigCheck::errors.
absl::StatusOr<ConfigCheck> ValidateConfig(const std::filesystem::path& path);
absl::StatusOr<ConfigCheck> ValidateConfigText(
    std::string_view text, const std::filesystem::path& base_dir);

struct StageRecord {
  std::string name;
  std::string input_sha256;
  std::map<std::string, std::string> outputs;  // File -> SHA-256.

  friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

// Content hashes only, so an unchanged rerun reproduces it byte for byte.
// Wall-clock timings go to run_timings.json.
struct RunManifest {
  std::string toolkit_version;
  std::string config_sha256;
  std::vector<StageRecord> stages;

  std::string ToJson() const;
  static absl::StatusOr<RunManifest> FromJson(std::string_view text);
  const StageRecord* Find(std::string_view stage) const;
};

struct PipelineRun {
  RunManifest manifest;
  std::vector<std::string> executed;  // Stages that ran.
  std::vector<std::string> skipped;   // Stages reused from a prior run.
};

// Runs every stage in dependency order, skipping stages whose inputs and
// outputs are unchanged since the last recorded run. The manifest is
// rewritten after every stage, so a failed run resumes where it stopped.
absl::StatusOr<PipelineRun> RunPipeline(const PipelineConfig& config,
                                        bool force = false);

std::string_view ToolkitVersion();

}  // namespace argpat

#endif  // ARGPAT_PIPELINE_H_
