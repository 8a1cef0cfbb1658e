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

#ifndef ARGPAT_COMMUNITIES_H_
#define ARGPAT_COMMUNITIES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "argpat/linkage.h"
#include "argpat/phrases.h"

namespace argpat {

// Cluster assignment of the nodes of a LinkageNetwork.
struct Partition {
  std::vector<int> assignment;  // Indexed by network node.
  int n_clusters = 0;
  double modularity = 0.0;

  friend bool operator==(const Partition&, const Partition&) = default;
};

// Weighted Newman-Girvan modularity
//   Q = sum_c [ W_c / W - resolution * (S_c / 2W)^2 ]
// with W the total edge weight, W_c the weight inside c and S_c the summed
// weighted degree of c. Fails when W is zero or the assignment does not
// cover every node.
absl::StatusOr<double> Modularity(const LinkageNetwork& network,
                                  std::span<const int> assignment,
                                  double resolution = 1.0);

// Two-phase Louvain: local moves in a seeded random order until no move
// improves modularity, then aggregation, repeated until a level makes no
// move. Each result is refined by node-level moves followed by further
// coarse levels while modularity rises. The best of `restarts` runs, each
// on its own derived random stream, is returned. Cluster ids are ordered
// by descending size (ties by smallest member). Identical inputs give
// bit-identical output.
absl::StatusOr<Partition> Louvain(const LinkageNetwork& network, uint64_t seed,
                                  double resolution = 1.0, int restarts = 64);

// Single-node moves on the original network, no aggregation, until no move
// improves modularity. Returns the input unchanged when it is already a
// fixed point; otherwise emptied clusters are dropped and the remaining ids
// keep their relative order.
absl::StatusOr<Partition> RefinePartition(const LinkageNetwork& network,
                                          const Partition& partition,
                                          uint64_t seed,
                                          double resolution = 1.0);

enum class Provenance { kSeed, kBigram, kCogproc, kExternal };

std::string_view ProvenanceName(Provenance provenance);
absl::StatusOr<Provenance> ParseProvenance(std::string_view name);

// The fragment-cluster graph used to gate lexicon admissions. Each cluster
// is one node carrying its members' internal weight as a self-loop; an
// admitted fragment adds an edge of weight w to its cluster.
struct ClusterGraph {
  std::vector<double> internal;  // Intra-cluster weight.
  std::vector<double> strength;  // Summed weighted degree.
  double total_weight = 0.0;
  double resolution = 1.0;

  static ClusterGraph FromNetwork(const LinkageNetwork& network,
                                  std::span<const int> assignment,
                                  int n_clusters, double resolution);

  double Modularity() const;
  // Modularity after attaching a new fragment to `cluster` with weight w.
  double ModularityWith(int cluster, double weight) const;
  void Attach(int cluster, double weight);

  friend bool operator==(const ClusterGraph&, const ClusterGraph&) = default;
};

struct LexiconEntry {
  Fragment fragment;
  int cluster = 0;
  Provenance provenance = Provenance::kSeed;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

// Every fragment of every argument pattern.
struct PatternLexicon {
  std::vector<LexiconEntry> entries;  // Sorted by fragment text.
  int n_clusters = 0;
  ClusterGraph graph;
  std::map<int, std::string> names;  // Human labels; no algorithmic role.

  const LexiconEntry* Find(std::string_view text) const;
  double modularity() const { return graph.Modularity(); }
  // Assignment over `entries`, in entry order.
  Partition partition() const;
  std::vector<Fragment> Fragments() const;
  std::vector<size_t> ClusterSizes() const;

  friend bool operator==(const PatternLexicon&, const PatternLexicon&) = default;
};

// Lexicon over the clustered network. Nodes without any edge carry no
// linkage evidence and are left out; the remaining cluster ids are
// compacted in their original order. Unigrams are tagged seed and bigrams
// bigram.
absl::StatusOr<PatternLexicon> BuildLexicon(const LinkageNetwork& network,
                                            const Partition& partition,
                                            double resolution = 1.0);

struct AdmissionRecord {
  std::string fragment;
  int argmax_cluster = -1;  // -1 when the candidate links to no cluster.
  double linkage_bits = 0.0;
  double modularity_before = 0.0;
  double modularity_after = 0.0;
  bool accepted = false;

  friend bool operator==(const AdmissionRecord&,
                         const AdmissionRecord&) = default;
};

struct ExpansionOptions {
  Provenance tag = Provenance::kCogproc;
  // When set, cluster linkage uses the memberships at the start of the
  // expansion; otherwise each admission counts toward later candidates.
  bool freeze_counts = false;
};

struct ExpansionResult {
  PatternLexicon lexicon;
  std::vector<AdmissionRecord> log;
  std::vector<std::string> skipped;  // Human-readable reasons.
};

// Admits candidates one at a time, in descending corpus frequency (ties by
// text). Each candidate is tied to the cluster with maximum cluster linkage
// and admitted only if that strictly raises the modularity of the
// fragment-cluster graph. Existing memberships never change. `counts` must
// cover the lexicon fragments and the candidates.
absl::StatusOr<ExpansionResult> ExpandLexicon(
    const FragmentCounts& counts, const PatternLexicon& lexicon,
    std::span<const Fragment> candidates, const ExpansionOptions& options);

// Re-applies the accepted rows of an admission log.
absl::StatusOr<PatternLexicon> ReplayAdmissions(
    const PatternLexicon& base, std::span<const AdmissionRecord> log,
    Provenance tag);

// CSV: fragment,cluster_id,provenance (with header).
std::string LexiconToCsv(const PatternLexicon& lexicon);
// Rebuilds entries and n_clusters; the cluster graph is left empty.
absl::StatusOr<PatternLexicon> ParseLexiconCsv(std::string_view text);

// Full lexicon state including the cluster graph, for chaining expansions.
std::string LexiconToJson(const PatternLexicon& lexicon);
absl::StatusOr<PatternLexicon> ParseLexiconJson(std::string_view text);

// CSV: fragment,argmax_cluster,linkage_bits,modularity_before,
//      modularity_after,accepted
std::string AdmissionLogToCsv(std::span<const AdmissionRecord> log);
absl::StatusOr<std::vector<AdmissionRecord>> ParseAdmissionLogCsv(
    std::string_view text);

}  // namespace argpat

#endif  // ARGPAT_COMMUNITIES_H_
