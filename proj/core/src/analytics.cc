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

#include "argpat/analytics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "argpat/parallel.h"
#include "argpat/rng.h"
#include "argpat/text.h"

namespace argpat {
namespace {

double Bonus(Outcome outcome, double mean, double baseline) {
  if (outcome == Outcome::kDelta) return 100.0 * (mean / baseline - 1.0);
  return mean - baseline;
}

// Comments of one topic, with per-pattern counts that permutations keep.
struct Stratum {
  int topic = 0;
  std::vector<int> labels;
  std::vector<double> outcome;
  std::vector<size_t> count;  // Per pattern.
  double baseline = 0.0;
};

std::vector<Stratum> Stratify(const EfficacySample& sample) {
  std::map<int, Stratum> by_topic;
  for (size_t i = 0; i < sample.size(); ++i) {
    Stratum& s = by_topic[sample.topic[i]];
    s.topic = sample.topic[i];
    s.labels.push_back(sample.pattern[i]);
    s.outcome.push_back(sample.outcome[i]);
  }
  std::vector<Stratum> out;
  for (auto& [topic, s] : by_topic) {
    s.count.assign(static_cast<size_t>(sample.n_patterns), 0);
    double total = 0.0;
    for (size_t i = 0; i < s.labels.size(); ++i) {
      ++s.count[static_cast<size_t>(s.labels[i])];
      total += s.outcome[i];
    }
    s.baseline = total / static_cast<double>(s.labels.size());
    out.push_back(std::move(s));
  }
  return out;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string_view OutcomeName(Outcome outcome) {
  return outcome == Outcome::kDelta ? "delta" : "score";
}

absl::StatusOr<Outcome> ParseOutcome(std::string_view name) {
  if (name == "delta") return Outcome::kDelta;
  if (name == "score") return Outcome::kScore;
  return absl::InvalidArgumentError(
      StrCat("outcome must be 'delta' or 'score', got '", name, "'"));
}

EfficacySample CollectEfficacySample(const CorpusView& view,
                                     std::span<const PatternVector> tags,
                                     std::span<const std::optional<int>> topics,
                                     int n_patterns, Outcome outcome) {
  EfficacySample sample;
  sample.n_patterns = n_patterns;
  for (size_t i : view.Indices()) {
    const Document& doc = view.corpus()[i];
    if (doc.kind != DocKind::kReply) continue;
    if (!tags[i].dominant || !topics[i]) continue;
    const double y = outcome == Outcome::kDelta
                         ? (doc.delta_awarded ? 1.0 : 0.0)
                         : static_cast<double>(doc.score);
    sample.Add(*tags[i].dominant, *topics[i], y);
  }
  return sample;
}

std::vector<EfficacyRow> ComputeEfficacy(const EfficacySample& sample,
                                         Outcome outcome, size_t n_floor) {
  const size_t np = static_cast<size_t>(sample.n_patterns);
  std::vector<EfficacyRow> rows;
  auto emit = [&](std::optional<int> topic, std::span<const size_t> index) {
    std::vector<double> sum(np, 0.0);
    std::vector<size_t> count(np, 0);
    double total = 0.0;
    for (size_t i : index) {
      const size_t p = static_cast<size_t>(sample.pattern[i]);
      sum[p] += sample.outcome[i];
      ++count[p];
      total += sample.outcome[i];
    }
    const double baseline = total / static_cast<double>(index.size());
    for (size_t p = 0; p < np; ++p) {
      if (count[p] == 0) continue;
      EfficacyRow row;
      row.pattern = static_cast<int>(p);
      row.topic = topic;
      row.n_comments = count[p];
      row.n_topic = index.size();
      row.baseline = baseline;
      row.mean = sum[p] / static_cast<double>(count[p]);
      row.defined = outcome == Outcome::kScore || baseline > 0.0;
      row.bonus = row.defined ? Bonus(outcome, row.mean, baseline)
                              : std::numeric_limits<double>::quiet_NaN();
      row.suppressed = count[p] < n_floor;
      rows.push_back(row);
    }
  };
  if (sample.size() == 0) return rows;
  std::vector<size_t> all(sample.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  emit(std::nullopt, all);
  std::map<int, std::vector<size_t>> by_topic;
  for (size_t i = 0; i < sample.size(); ++i) {
    by_topic[sample.topic[i]].push_back(i);
  }
  for (const auto& [topic, index] : by_topic) emit(topic, index);
  return rows;
}

absl::Status Significance(const EfficacySample& sample, Outcome outcome,
                          int n_permutations, uint64_t seed,
                          std::span<EfficacyRow> rows, int workers) {
  if (n_permutations < 1) {
    return absl::InvalidArgumentError("n_permutations must be positive");
  }
  if (sample.size() < 2) {
    return absl::FailedPreconditionError("too few comments to permute");
  }
  const size_t np = static_cast<size_t>(sample.n_patterns);
  const std::vector<Stratum> strata = Stratify(sample);
  const size_t ns = strata.size();

  std::vector<size_t> all_count(np, 0);
  double all_total = 0.0;
  for (const Stratum& s : strata) {
    for (size_t p = 0; p < np; ++p) all_count[p] += s.count[p];
    for (double y : s.outcome) all_total += y;
  }
  const double all_baseline = all_total / static_cast<double>(sample.size());

  // Slot (stratum, pattern); stratum ns is ALL.
  auto slot = [np](size_t stratum, size_t p) { return stratum * np + p; };
  std::vector<double> observed(np * (ns + 1), 0.0);
  std::vector<bool> tested(np * (ns + 1), false);
  std::map<int, size_t> stratum_of;
  for (size_t s = 0; s < ns; ++s) stratum_of[strata[s].topic] = s;
  for (const EfficacyRow& row : rows) {
    if (!row.defined) continue;
    size_t s = ns;
    if (row.topic) {
      auto it = stratum_of.find(*row.topic);
      if (it == stratum_of.end()) continue;
      s = it->second;
    }
    observed[slot(s, static_cast<size_t>(row.pattern))] = row.bonus;
    tested[slot(s, static_cast<size_t>(row.pattern))] = true;
  }

  const int chunks = std::max(1, std::min(workers, n_permutations));
  std::vector<std::vector<uint64_t>> exceed(
      static_cast<size_t>(chunks), std::vector<uint64_t>(observed.size(), 0));
  ParallelChunks(
      static_cast<size_t>(n_permutations), chunks,
      [&](size_t chunk, size_t begin, size_t end) {
        std::vector<uint64_t>& hits = exceed[chunk];
        std::vector<double> sums(np * (ns + 1));
        std::vector<int> labels;
        auto check = [&](size_t index, double mean, double baseline) {
          if (!tested[index]) return;
          const double b = Bonus(outcome, mean, baseline);
          const double obs = std::abs(observed[index]);
          if (std::abs(b) >= obs - 1e-9 * std::max(1.0, obs)) ++hits[index];
        };
        for (size_t r = begin; r < end; ++r) {
          Rng rng(Rng::Derive(seed, r));
          std::fill(sums.begin(), sums.end(), 0.0);
          for (size_t s = 0; s < ns; ++s) {
            labels = strata[s].labels;
            rng.Shuffle(std::span<int>(labels));
            for (size_t i = 0; i < labels.size(); ++i) {
              sums[slot(s, static_cast<size_t>(labels[i]))] +=
                  strata[s].outcome[i];
            }
            for (size_t p = 0; p < np; ++p) {
              sums[slot(ns, p)] += sums[slot(s, p)];
              if (strata[s].count[p] == 0) continue;
              check(slot(s, p),
                    sums[slot(s, p)] / static_cast<double>(strata[s].count[p]),
                    strata[s].baseline);
            }
          }
          for (size_t p = 0; p < np; ++p) {
            if (all_count[p] == 0) continue;
            check(slot(ns, p),
                  sums[slot(ns, p)] / static_cast<double>(all_count[p]),
                  all_baseline);
          }
        }
      });

  std::vector<uint64_t> total(observed.size(), 0);
  for (const auto& part : exceed) {
    for (size_t i = 0; i < total.size(); ++i) total[i] += part[i];
  }
  for (EfficacyRow& row : rows) {
    if (!row.defined) continue;
    size_t s = ns;
    if (row.topic) {
      auto it = stratum_of.find(*row.topic);
      if (it == stratum_of.end()) continue;
      s = it->second;
    }
    const uint64_t k = total[slot(s, static_cast<size_t>(row.pattern))];
    row.p_value = static_cast<double>(k + 1) /
                  static_cast<double>(n_permutations + 1);
  }
  return absl::OkStatus();
}

std::string_view Stars(std::optional<double> p_value) {
  if (!p_value) return "";
  if (*p_value < 1e-3) return "★★★";
  if (*p_value < 0.01) return "★★";
  if (*p_value < 0.05) return "★";
  return "";
}

absl::StatusOr<std::vector<UserProfile>> BuildProfiles(
    const CorpusView& view, std::span<const PatternVector> tags,
    size_t min_comments) {
  if (min_comments < 1) {
    return absl::InvalidArgumentError("min_comments must be at least 1");
  }
  std::map<std::string, UserProfile> by_author;
  for (size_t i : view.Indices()) {
    const Document& doc = view.corpus()[i];
    if (doc.kind != DocKind::kReply || doc.author.empty()) continue;
    const PatternVector& t = tags[i];
    if (t.total_hits == 0) continue;
    UserProfile& profile = by_author[doc.author];
    if (profile.mean_pattern.empty()) {
      profile.author = doc.author;
      profile.mean_pattern.assign(t.hits.size(), 0.0);
    }
    ++profile.n_comments;
    for (size_t p = 0; p < t.hits.size(); ++p) {
      profile.mean_pattern[p] += static_cast<double>(t.hits[p]) /
                                 static_cast<double>(t.total_hits);
    }
  }
  std::vector<UserProfile> out;
  for (auto& [author, profile] : by_author) {
    if (profile.n_comments < min_comments) continue;
    for (double& x : profile.mean_pattern) {
      x /= static_cast<double>(profile.n_comments);
    }
    out.push_back(std::move(profile));
  }
  if (out.empty()) {
    return absl::FailedPreconditionError(
        StrCat("no author has ", min_comments, " or more tagged replies"));
  }
  return out;
}

absl::StatusOr<PcaResult> PcaProfiles(
    std::span<const UserProfile> profiles,
    const std::map<int, std::string>& pattern_names) {
  if (profiles.size() < 3) {
    return absl::FailedPreconditionError("PCA needs at least 3 profiles");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(profiles.size());
  const Eigen::Index p =
      static_cast<Eigen::Index>(profiles.front().mean_pattern.size());
  if (p < 2) {
    return absl::FailedPreconditionError("PCA needs at least 2 patterns");
  }
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& v = profiles[static_cast<size_t>(i)].mean_pattern;
    if (static_cast<Eigen::Index>(v.size()) != p) {
      return absl::InvalidArgumentError("profiles differ in pattern count");
    }
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = v[static_cast<size_t>(j)];
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    return absl::InternalError("eigendecomposition failed");
  }
  const Eigen::VectorXd values = solver.eigenvalues();
  const Eigen::MatrixXd vectors = solver.eigenvectors();
  double total = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) total += std::max(values(j), 0.0);
  if (!(total > 1e-15)) {
    return absl::FailedPreconditionError("profiles have zero variance");
  }

  auto named = [&](std::string_view want) -> std::optional<size_t> {
    for (const auto& [id, name] : pattern_names) {
      if (ToLowerAscii(name) == want && id >= 0 && id < p) {
        return static_cast<size_t>(id);
      }
    }
    return std::nullopt;
  };
  const std::optional<size_t> anchors[2] = {named("personal"),
                                            named("causation")};

  PcaResult result;
  for (Eigen::Index c = p - 1; c >= 0; --c) {
    std::vector<double> axis(static_cast<size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) axis[static_cast<size_t>(j)] = vectors(j, c);
    const size_t rank = result.components.size();
    size_t anchor = 0;
    if (rank < 2 && anchors[rank] && std::abs(axis[*anchors[rank]]) > 1e-12) {
      anchor = *anchors[rank];
    } else {
      for (size_t j = 1; j < axis.size(); ++j) {
        if (std::abs(axis[j]) > std::abs(axis[anchor]) + 1e-12) anchor = j;
      }
    }
    if (axis[anchor] < 0) {
      for (double& a : axis) a = -a;
    }
    const double variance = std::max(values(c), 0.0);
    result.components.push_back(std::move(axis));
    result.variances.push_back(variance);
    result.explained.push_back(variance / total);
  }
  result.mean.assign(mean.data(), mean.data() + p);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::array<double, 2> s{0.0, 0.0};
    for (size_t c = 0; c < 2; ++c) {
      for (Eigen::Index j = 0; j < p; ++j) {
        s[c] += x(i, j) * result.components[c][static_cast<size_t>(j)];
      }
    }
    result.authors.push_back(profiles[static_cast<size_t>(i)].author);
    result.scores.push_back(s);
  }
  return result;
}

std::string QuadrantRow::Name() const {
  return StrCat(pc1_high ? "pc1_high" : "pc1_low", "/",
                pc2_high ? "pc2_high" : "pc2_low");
}

absl::StatusOr<std::vector<QuadrantRow>> QuadrantBonus(
    std::span<const UserProfile> profiles, const PcaResult& pca,
    const CorpusView& view, std::span<const PatternVector> tags) {
  if (pca.scores.size() != profiles.size()) {
    return absl::InvalidArgumentError("PCA does not match the profiles");
  }
  std::vector<double> pc1, pc2;
  for (const auto& s : pca.scores) {
    pc1.push_back(s[0]);
    pc2.push_back(s[1]);
  }
  const double m1 = Median(pc1);
  const double m2 = Median(pc2);

  // Quadrant index: 0 = (high, high), 1 = (high, low), 2 = (low, high),
  // 3 = (low, low).
  std::map<std::string, int> quadrant_of;
  std::vector<QuadrantRow> rows(4);
  for (int q = 0; q < 4; ++q) {
    rows[static_cast<size_t>(q)].pc1_high = q < 2;
    rows[static_cast<size_t>(q)].pc2_high = q % 2 == 0;
  }
  for (size_t u = 0; u < profiles.size(); ++u) {
    const int q = (pc1[u] > m1 ? 0 : 2) + (pc2[u] > m2 ? 0 : 1);
    quadrant_of[profiles[u].author] = q;
    ++rows[static_cast<size_t>(q)].n_users;
  }
  std::vector<size_t> deltas(4, 0);
  size_t all_comments = 0, all_deltas = 0;
  for (size_t i : view.Indices()) {
    const Document& doc = view.corpus()[i];
    if (doc.kind != DocKind::kReply || tags[i].total_hits == 0) continue;
    auto it = quadrant_of.find(doc.author);
    if (it == quadrant_of.end()) continue;
    ++rows[static_cast<size_t>(it->second)].n_comments;
    ++all_comments;
    if (doc.delta_awarded) {
      ++deltas[static_cast<size_t>(it->second)];
      ++all_deltas;
    }
  }
  for (size_t q = 0; q < 4; ++q) {
    if (rows[q].n_users == 0 || rows[q].n_comments == 0) {
      return absl::FailedPreconditionError(
          StrCat("quadrant ", rows[q].Name(), " is empty"));
    }
  }
  const double baseline =
      static_cast<double>(all_deltas) / static_cast<double>(all_comments);
  for (size_t q = 0; q < 4; ++q) {
    QuadrantRow& row = rows[q];
    row.delta_rate = static_cast<double>(deltas[q]) /
                     static_cast<double>(row.n_comments);
    row.baseline = baseline;
    row.defined = baseline > 0.0;
    row.bonus = row.defined ? 100.0 * (row.delta_rate / baseline - 1.0)
                            : std::numeric_limits<double>::quiet_NaN();
  }
  return rows;
}

}  // namespace argpat
