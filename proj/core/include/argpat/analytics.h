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

#ifndef ARGPAT_ANALYTICS_H_
#define ARGPAT_ANALYTICS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "argpat/corpus.h"
#include "argpat/tagging.h"

namespace argpat {

enum class Outcome { kDelta, kScore };

std::string_view OutcomeName(Outcome outcome);
absl::StatusOr<Outcome> ParseOutcome(std::string_view name);

// Comments entering the efficacy tables: one entry per visible reply that
// has a dominant pattern and a known topic.
struct EfficacySample {
  int n_patterns = 0;
  std::vector<int> pattern;
  std::vector<int> topic;
  std::vector<double> outcome;  // 0/1 for delta, the vote score otherwise.

  size_t size() const { return pattern.size(); }
  void Add(int p, int t, double y) {
    pattern.push_back(p);
    topic.push_back(t);
    outcome.push_back(y);
  }
};

// `tags` and `topics` are indexed like the corpus.
EfficacySample CollectEfficacySample(const CorpusView& view,
                                     std::span<const PatternVector> tags,
                                     std::span<const std::optional<int>> topics,
                                     int n_patterns, Outcome outcome);

struct EfficacyRow {
  int pattern = 0;
  std::optional<int> topic;  // nullopt is the ALL row.
  size_t n_comments = 0;     // Comments dominated by `pattern` in the topic.
  size_t n_topic = 0;        // All sampled comments in the topic.
  double baseline = 0.0;     // Topic delta rate or mean score.
  double mean = 0.0;         // Same statistic over the pattern's comments.
  // Delta: 100 * (mean / baseline - 1). Score: mean - baseline.
  double bonus = 0.0;
  bool defined = true;      // False when the delta baseline is zero.
  bool suppressed = false;  // n_comments below the reporting floor.
  std::optional<double> p_value;
};

// Rows for the ALL stratum followed by each topic in ascending order,
// patterns ascending within each. Patterns with no comments in a stratum
// get no row.
std::vector<EfficacyRow> ComputeEfficacy(const EfficacySample& sample,
                                         Outcome outcome,
                                         size_t n_floor = 200);

// Permutation test. Within each topic the dominant-pattern labels are
// shuffled across comments; p = (1 + #{|perm bonus| >= |observed|}) /
// (1 + n_permutations). The ALL row uses the same within-topic shuffles.
// Replicate r draws from its own stream, so results do not depend on the
// worker count.
absl::Status Significance(const EfficacySample& sample, Outcome outcome,
                          int n_permutations, uint64_t seed,
                          std::span<EfficacyRow> rows, int workers = 1);

// "★" below 0.05, "★★" below 0.01, "★★★" below 0.001.
std::string_view Stars(std::optional<double> p_value);

struct UserProfile {
  std::string author;
  size_t n_comments = 0;
  std::vector<double> mean_pattern;
};

// Mean of per-reply hit proportions over each author's visible replies with
// at least one hit; authors with fewer than min_comments such replies are
// left out. Sorted by author.
absl::StatusOr<std::vector<UserProfile>> BuildProfiles(
    const CorpusView& view, std::span<const PatternVector> tags,
    size_t min_comments = 20);

struct PcaResult {
  // Every principal axis, by descending variance; rows are orthonormal.
  std::vector<std::vector<double>> components;
  std::vector<double> variances;
  std::vector<double> explained;  // variances / total variance.
  std::vector<double> mean;
  std::vector<std::string> authors;
  std::vector<std::array<double, 2>> scores;  // (pc1, pc2) per author.

  std::array<std::vector<double>, 2> loadings() const {
    return {components[0], components[1]};
  }
};

// Covariance eigendecomposition of mean-centered profiles. PC1 is oriented
// so the pattern named "Personal" loads positively and PC2 so "Causation"
// does; without those names the largest-magnitude loading is positive.
absl::StatusOr<PcaResult> PcaProfiles(
    std::span<const UserProfile> profiles,
    const std::map<int, std::string>& pattern_names = {});

struct QuadrantRow {
  bool pc1_high = false;
  bool pc2_high = false;
  size_t n_users = 0;
  size_t n_comments = 0;
  double delta_rate = 0.0;
  double baseline = 0.0;
  double bonus = 0.0;  // 100 * (delta_rate / baseline - 1).
  bool defined = true;

  std::string Name() const;
};

// Users split at the median of each axis (above the median is high). Each
// quadrant's delta rate is taken over its users' hit-bearing visible
// replies and compared with the rate over all profiled users' replies.
absl::StatusOr<std::vector<QuadrantRow>> QuadrantBonus(
    std::span<const UserProfile> profiles, const PcaResult& pca,
    const CorpusView& view, std::span<const PatternVector> tags);

}  // namespace argpat

#endif  // ARGPAT_ANALYTICS_H_
