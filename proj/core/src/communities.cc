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

#include "argpat/communities.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <map>
#include <set>

#include "argpat/rng.h"
#include "argpat/text.h"
#include "json.hpp"

namespace argpat {
namespace {

// Undirected weighted graph in adjacency form with explicit self-loops, as
// produced by Louvain aggregation.
struct Graph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adjacency;  // No self.
  std::vector<double> self_loop;
  std::vector<double> degree;  // sum of incident weights + 2 * self_loop
  double total = 0.0;          // m: every edge once, self-loops included.

  static Graph FromNetwork(const LinkageNetwork& network) {
    Graph g;
    g.n = static_cast<int>(network.nodes.size());
    g.adjacency.resize(static_cast<size_t>(g.n));
    g.self_loop.assign(static_cast<size_t>(g.n), 0.0);
    for (const auto& e : network.edges) {
      g.adjacency[static_cast<size_t>(e.u)].emplace_back(e.v, e.weight);
      g.adjacency[static_cast<size_t>(e.v)].emplace_back(e.u, e.weight);
    }
    g.Finish();
    return g;
  }

  void Finish() {
    degree.assign(static_cast<size_t>(n), 0.0);
    total = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<size_t>(i);
      double d = 2.0 * self_loop[ui];
      for (const auto& [j, w] : adjacency[ui]) {
        d += w;
        if (j > i) total += w;
      }
      degree[ui] = d;
      total += self_loop[ui];
    }
  }
};

// One round of local moves. Returns true if any node changed community.
// Each node goes to its best community, or with `explore` set to a random
// community among those that improve on staying.
bool LocalMoves(const Graph& g, std::span<const int> order,
                std::vector<int>* community, std::vector<double>* tot,
                double resolution, Rng* explore = nullptr) {
  const double two_m = 2.0 * g.total;
  std::vector<double> link(static_cast<size_t>(g.n), 0.0);
  std::vector<char> is_touched(static_cast<size_t>(g.n), 0);
  std::vector<int> touched;
  std::vector<int> improving;
  bool any_move = false;
  // Bounded only as a guard against floating-point cycling.
  for (int pass = 0; pass < 1000; ++pass) {
    bool moved = false;
    for (int i : order) {
      const auto ui = static_cast<size_t>(i);
      const int current = (*community)[ui];
      const double k = g.degree[ui];

      touched.clear();
      for (const auto& [j, w] : g.adjacency[ui]) {
        const auto c = static_cast<size_t>((*community)[static_cast<size_t>(j)]);
        if (!is_touched[c]) {
          is_touched[c] = 1;
          touched.push_back(static_cast<int>(c));
        }
        link[c] += w;
      }

      (*tot)[static_cast<size_t>(current)] -= k;
      int best = current;
      const double stay_gain = link[static_cast<size_t>(current)] -
                               resolution *
                                   (*tot)[static_cast<size_t>(current)] * k /
                                   two_m;
      double best_gain = stay_gain;
      const double eps = 1e-12 * std::max(k, 1e-300);
      improving.clear();
      for (int c : touched) {
        if (c == current) continue;
        const double gain = link[static_cast<size_t>(c)] -
                            resolution * (*tot)[static_cast<size_t>(c)] * k /
                                two_m;
        if (gain > stay_gain + eps) improving.push_back(c);
        if (gain > best_gain + eps) {
          best = c;
          best_gain = gain;
        }
      }
      if (explore != nullptr && !improving.empty()) {
        best = improving[explore->UniformInt(improving.size())];
      }
      (*tot)[static_cast<size_t>(best)] += k;
      if (best != current) {
        (*community)[ui] = best;
        moved = true;
      }
      for (int c : touched) {
        link[static_cast<size_t>(c)] = 0.0;
        is_touched[static_cast<size_t>(c)] = 0;
      }
    }
    if (!moved) break;
    any_move = true;
  }
  return any_move;
}

// Renumbers community ids to 0..k-1 in order of first appearance.
int Compact(std::vector<int>* community) {
  std::vector<int> remap;
  int next = 0;
  for (int& c : *community) {
    const auto uc = static_cast<size_t>(c);
    if (uc >= remap.size()) remap.resize(uc + 1, -1);
    if (remap[uc] < 0) remap[uc] = next++;
    c = remap[uc];
  }
  return next;
}

Graph Aggregate(const Graph& g, std::span<const int> community,
                int n_communities) {
  Graph out;
  out.n = n_communities;
  out.adjacency.resize(static_cast<size_t>(n_communities));
  out.self_loop.assign(static_cast<size_t>(n_communities), 0.0);
  std::vector<std::map<int, double>> merged(
      static_cast<size_t>(n_communities));
  for (int i = 0; i < g.n; ++i) {
    const auto ui = static_cast<size_t>(i);
    const int ci = community[ui];
    out.self_loop[static_cast<size_t>(ci)] += g.self_loop[ui];
    for (const auto& [j, w] : g.adjacency[ui]) {
      if (j < i) continue;
      const int cj = community[static_cast<size_t>(j)];
      if (ci == cj) {
        out.self_loop[static_cast<size_t>(ci)] += w;
      } else {
        merged[static_cast<size_t>(ci)][cj] += w;
        merged[static_cast<size_t>(cj)][ci] += w;
      }
    }
  }
  for (int c = 0; c < n_communities; ++c) {
    for (const auto& [d, w] : merged[static_cast<size_t>(c)]) {
      out.adjacency[static_cast<size_t>(c)].emplace_back(d, w);
    }
  }
  out.Finish();
  return out;
}

// Relabels so that larger clusters get smaller ids; equal sizes are ordered
// by their smallest member.
int RelabelBySize(std::vector<int>* assignment) {
  const int k = Compact(assignment);
  std::vector<size_t> size(static_cast<size_t>(k), 0);
  std::vector<size_t> first(static_cast<size_t>(k), SIZE_MAX);
  for (size_t i = 0; i < assignment->size(); ++i) {
    const auto c = static_cast<size_t>((*assignment)[i]);
    ++size[c];
    first[c] = std::min(first[c], i);
  }
  std::vector<int> order(static_cast<size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto ua = static_cast<size_t>(a), ub = static_cast<size_t>(b);
    if (size[ua] != size[ub]) return size[ua] > size[ub];
    return first[ua] < first[ub];
  });
  std::vector<int> rank(static_cast<size_t>(k));
  for (int r = 0; r < k; ++r) rank[static_cast<size_t>(order[r])] = r;
  for (int& c : *assignment) c = rank[static_cast<size_t>(c)];
  return k;
}

absl::Status CheckNetwork(const LinkageNetwork& network) {
  if (network.nodes.empty()) return absl::InvalidArgumentError("empty network");
  for (const auto& e : network.edges) {
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      return absl::InvalidArgumentError(
          "network weights must be positive and finite");
    }
  }
  if (!(network.TotalWeight() > 0.0)) {
    return absl::InvalidArgumentError("network has zero total edge weight");
  }
  return absl::OkStatus();
}

absl::Status CheckAssignment(const LinkageNetwork& network,
                             std::span<const int> assignment) {
  if (assignment.size() != network.nodes.size()) {
    return absl::InvalidArgumentError(
        "assignment must cover every network node");
  }
  for (int c : assignment) {
    if (c < 0) return absl::InvalidArgumentError("negative cluster id");
  }
  return absl::OkStatus();
}

std::vector<int> ShuffledOrder(int n, Rng& rng) {
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.Shuffle(std::span<int>(order));
  return order;
}

// Louvain levels starting from `start` (compact ids over base nodes):
// the graph is aggregated by `start`, then local moves and aggregation
// repeat until a level makes no move. Returns base-node assignments.
std::vector<int> Multilevel(const Graph& base, std::vector<int> start,
                            Rng& rng, double resolution, bool explore) {
  std::vector<int> assignment = std::move(start);
  int k = Compact(&assignment);
  Graph g = k == base.n ? base : Aggregate(base, assignment, k);
  while (true) {
    std::vector<int> community(static_cast<size_t>(g.n));
    std::iota(community.begin(), community.end(), 0);
    std::vector<double> tot = g.degree;
    const std::vector<int> order = ShuffledOrder(g.n, rng);
    if (!LocalMoves(g, order, &community, &tot, resolution,
                    explore ? &rng : nullptr)) {
      break;
    }
    k = Compact(&community);
    for (int& a : assignment) a = community[static_cast<size_t>(a)];
    if (k == g.n) break;
    g = Aggregate(g, community, k);
  }
  return assignment;
}

}  // namespace

absl::StatusOr<double> Modularity(const LinkageNetwork& network,
                                  std::span<const int> assignment,
                                  double resolution) {
  if (auto s = CheckAssignment(network, assignment); !s.ok()) return s;
  const double w = network.TotalWeight();
  if (!(w > 0.0)) {
    return absl::InvalidArgumentError("network has zero total edge weight");
  }
  const int k = assignment.empty()
                    ? 0
                    : *std::max_element(assignment.begin(), assignment.end()) +
                          1;
  std::vector<double> inside(static_cast<size_t>(k), 0.0);
  std::vector<double> strength(static_cast<size_t>(k), 0.0);
  for (const auto& e : network.edges) {
    const int cu = assignment[static_cast<size_t>(e.u)];
    const int cv = assignment[static_cast<size_t>(e.v)];
    strength[static_cast<size_t>(cu)] += e.weight;
    strength[static_cast<size_t>(cv)] += e.weight;
    if (cu == cv) inside[static_cast<size_t>(cu)] += e.weight;
  }
  double q = 0.0;
  for (size_t c = 0; c < inside.size(); ++c) {
    const double share = strength[c] / (2.0 * w);
    q += inside[c] / w - resolution * share * share;
  }
  return q;
}

absl::StatusOr<Partition> Louvain(const LinkageNetwork& network, uint64_t seed,
                                  double resolution, int restarts) {
  if (auto s = CheckNetwork(network); !s.ok()) return s;
  if (!(resolution > 0.0)) {
    return absl::InvalidArgumentError("resolution must be positive");
  }
  if (restarts < 1) return absl::InvalidArgumentError("restarts must be >= 1");
  const Graph base = Graph::FromNetwork(network);
  auto quality = [&](std::span<const int> a) {
    return *Modularity(network, a, resolution);
  };

  std::vector<int> best;
  double best_q = 0.0;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(Rng::Derive(seed, static_cast<uint64_t>(r)));
    std::vector<int> identity(static_cast<size_t>(base.n));
    std::iota(identity.begin(), identity.end(), 0);
    // The first run is classic greedy Louvain; later runs pick among
    // improving moves at random to reach other local optima.
    const bool explore = r > 0;
    std::vector<int> assignment =
        Multilevel(base, identity, rng, resolution, explore);
    double q = quality(assignment);
    while (true) {
      // Node-level moves undo merges that stopped paying off, then the
      // coarse levels get another chance to merge whole communities.
      std::vector<int> refined = assignment;
      std::vector<double> tot(static_cast<size_t>(base.n), 0.0);
      for (int i = 0; i < base.n; ++i) {
        tot[static_cast<size_t>(refined[static_cast<size_t>(i)])] +=
            base.degree[static_cast<size_t>(i)];
      }
      LocalMoves(base, ShuffledOrder(base.n, rng), &refined, &tot, resolution);
      Compact(&refined);
      std::vector<int> next =
          Multilevel(base, refined, rng, resolution, explore);
      const double next_q = quality(next);
      if (!(next_q > q + 1e-12)) break;
      assignment = std::move(next);
      q = next_q;
    }
    if (best.empty() || q > best_q + 1e-12) {
      best = std::move(assignment);
      best_q = q;
    }
  }

  Partition partition;
  partition.n_clusters = RelabelBySize(&best);
  partition.assignment = std::move(best);
  auto q = Modularity(network, partition.assignment, resolution);
  if (!q.ok()) return q.status();
  partition.modularity = *q;
  return partition;
}

absl::StatusOr<Partition> RefinePartition(const LinkageNetwork& network,
                                          const Partition& partition,
                                          uint64_t seed, double resolution) {
  if (auto s = CheckNetwork(network); !s.ok()) return s;
  if (auto s = CheckAssignment(network, partition.assignment); !s.ok()) {
    return s;
  }
  Rng rng(seed);
  const Graph g = Graph::FromNetwork(network);
  std::vector<int> community = partition.assignment;
  const int k = *std::max_element(community.begin(), community.end()) + 1;
  std::vector<double> tot(static_cast<size_t>(std::max(k, g.n)), 0.0);
  for (int i = 0; i < g.n; ++i) {
    tot[static_cast<size_t>(community[static_cast<size_t>(i)])] +=
        g.degree[static_cast<size_t>(i)];
  }
  const std::vector<int> order = ShuffledOrder(g.n, rng);
  if (!LocalMoves(g, order, &community, &tot, resolution)) {
    Partition same = partition;
    auto q = Modularity(network, same.assignment, resolution);
    if (!q.ok()) return q.status();
    same.modularity = *q;
    return same;
  }
  // Drop emptied ids while keeping the survivors' relative order.
  std::vector<bool> used(static_cast<size_t>(k), false);
  for (int c : community) used[static_cast<size_t>(c)] = true;
  std::vector<int> remap(static_cast<size_t>(k), -1);
  int next = 0;
  for (int c = 0; c < k; ++c) {
    if (used[static_cast<size_t>(c)]) remap[static_cast<size_t>(c)] = next++;
  }
  Partition out;
  out.assignment.reserve(community.size());
  for (int c : community) out.assignment.push_back(remap[static_cast<size_t>(c)]);
  out.n_clusters = next;
  auto q = Modularity(network, out.assignment, resolution);
  if (!q.ok()) return q.status();
  out.modularity = *q;
  return out;
}

std::string_view ProvenanceName(Provenance provenance) {
  switch (provenance) {
    case Provenance::kSeed:
      return "seed";
    case Provenance::kBigram:
      return "bigram";
    case Provenance::kCogproc:
      return "cogproc";
    case Provenance::kExternal:
      return "external";
  }
  return "unknown";
}

absl::StatusOr<Provenance> ParseProvenance(std::string_view name) {
  for (Provenance p : {Provenance::kSeed, Provenance::kBigram,
                       Provenance::kCogproc, Provenance::kExternal}) {
    if (ProvenanceName(p) == name) return p;
  }
  return absl::InvalidArgumentError(
      StrCat("unknown provenance '", name,
                   "' (expected seed, bigram, cogproc or external)"));
}

ClusterGraph ClusterGraph::FromNetwork(const LinkageNetwork& network,
                                       std::span<const int> assignment,
                                       int n_clusters, double resolution) {
  ClusterGraph g;
  g.internal.assign(static_cast<size_t>(n_clusters), 0.0);
  g.strength.assign(static_cast<size_t>(n_clusters), 0.0);
  g.resolution = resolution;
  for (const auto& e : network.edges) {
    const int cu = assignment[static_cast<size_t>(e.u)];
    const int cv = assignment[static_cast<size_t>(e.v)];
    if (cu >= 0) g.strength[static_cast<size_t>(cu)] += e.weight;
    if (cv >= 0) g.strength[static_cast<size_t>(cv)] += e.weight;
    if (cu >= 0 && cu == cv) g.internal[static_cast<size_t>(cu)] += e.weight;
    g.total_weight += e.weight;
  }
  return g;
}

double ClusterGraph::Modularity() const {
  if (!(total_weight > 0.0)) return 0.0;
  double q = 0.0;
  for (size_t c = 0; c < internal.size(); ++c) {
    const double share = strength[c] / (2.0 * total_weight);
    q += internal[c] / total_weight - resolution * share * share;
  }
  return q;
}

double ClusterGraph::ModularityWith(int cluster, double weight) const {
  ClusterGraph next = *this;
  next.Attach(cluster, weight);
  return next.Modularity();
}

void ClusterGraph::Attach(int cluster, double weight) {
  internal[static_cast<size_t>(cluster)] += weight;
  strength[static_cast<size_t>(cluster)] += 2.0 * weight;
  total_weight += weight;
}

const LexiconEntry* PatternLexicon::Find(std::string_view text) const {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), text,
      [](const LexiconEntry& e, std::string_view t) { return e.fragment.text < t; });
  if (it == entries.end() || it->fragment.text != text) return nullptr;
  return &*it;
}

Partition PatternLexicon::partition() const {
  Partition p;
  p.n_clusters = n_clusters;
  p.modularity = modularity();
  p.assignment.reserve(entries.size());
  for (const auto& e : entries) p.assignment.push_back(e.cluster);
  return p;
}

std::vector<Fragment> PatternLexicon::Fragments() const {
  std::vector<Fragment> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.fragment);
  return out;
}

std::vector<size_t> PatternLexicon::ClusterSizes() const {
  std::vector<size_t> sizes(static_cast<size_t>(n_clusters), 0);
  for (const auto& e : entries) ++sizes[static_cast<size_t>(e.cluster)];
  return sizes;
}

absl::StatusOr<PatternLexicon> BuildLexicon(const LinkageNetwork& network,
                                            const Partition& partition,
                                            double resolution) {
  if (auto s = CheckAssignment(network, partition.assignment); !s.ok()) {
    return s;
  }
  std::vector<bool> has_edge(network.nodes.size(), false);
  for (const auto& e : network.edges) {
    has_edge[static_cast<size_t>(e.u)] = true;
    has_edge[static_cast<size_t>(e.v)] = true;
  }
  std::vector<int> remap(static_cast<size_t>(partition.n_clusters), -1);
  for (size_t i = 0; i < network.nodes.size(); ++i) {
    if (has_edge[i]) remap[static_cast<size_t>(partition.assignment[i])] = 0;
  }
  int next = 0;
  for (int& r : remap) {
    if (r == 0) r = next++;
  }
  if (next == 0) {
    return absl::FailedPreconditionError("network has no edges to cluster");
  }

  PatternLexicon lexicon;
  lexicon.n_clusters = next;
  std::vector<int> kept(network.nodes.size(), -1);
  for (size_t i = 0; i < network.nodes.size(); ++i) {
    if (!has_edge[i]) continue;
    const int c = remap[static_cast<size_t>(partition.assignment[i])];
    kept[i] = c;
    const Fragment& f = network.nodes[i];
    lexicon.entries.push_back(
        {f, c,
         f.arity == Arity::kUnigram ? Provenance::kSeed : Provenance::kBigram});
  }
  lexicon.graph =
      ClusterGraph::FromNetwork(network, kept, next, resolution);
  return lexicon;
}

absl::StatusOr<ExpansionResult> ExpandLexicon(
    const FragmentCounts& counts, const PatternLexicon& lexicon,
    std::span<const Fragment> candidates, const ExpansionOptions& options) {
  ExpansionResult result;
  result.lexicon = lexicon;
  PatternLexicon& out = result.lexicon;

  std::vector<int> cluster_of(counts.num_fragments(), -1);
  for (const auto& e : lexicon.entries) {
    auto id = counts.Find(e.fragment.text);
    if (!id) {
      return absl::InvalidArgumentError(StrCat(
          "lexicon fragment '", e.fragment.text, "' missing from counts"));
    }
    cluster_of[static_cast<size_t>(*id)] = e.cluster;
  }

  struct Pending {
    Fragment fragment;
    FragmentId id;
    uint64_t frequency;
  };
  std::vector<Pending> pending;
  std::set<std::string> seen;
  for (const Fragment& f : candidates) {
    if (!seen.insert(f.text).second) continue;
    if (lexicon.Find(f.text) != nullptr) {
      result.skipped.push_back(
          StrCat(f.text, ": already in the lexicon"));
      continue;
    }
    auto id = counts.Find(f.text);
    if (!id || counts.document_frequency(*id) == 0) {
      result.skipped.push_back(
          StrCat(f.text, ": zero document frequency"));
      continue;
    }
    pending.push_back({f, *id, counts.frequency(*id)});
  }
  std::sort(pending.begin(), pending.end(),
            [](const Pending& a, const Pending& b) {
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              return a.fragment.text < b.fragment.text;
            });

  for (const Pending& candidate : pending) {
    auto detail =
        ClusterLinkage(counts, cluster_of, out.n_clusters, candidate.id);
    if (!detail.ok()) return detail.status();
    AdmissionRecord record;
    record.fragment = candidate.fragment.text;
    record.modularity_before = out.graph.Modularity();
    record.modularity_after = record.modularity_before;
    if (auto best = detail->BestCluster()) {
      record.argmax_cluster = *best;
      record.linkage_bits = *detail->bits[static_cast<size_t>(*best)];
      // A non-positive link cannot be attached to a modularity graph.
      if (record.linkage_bits > 0.0) {
        record.modularity_after =
            out.graph.ModularityWith(*best, record.linkage_bits);
      }
    } else {
      record.linkage_bits = std::nan("");
    }
    record.accepted = record.modularity_after > record.modularity_before;
    if (record.accepted) {
      out.graph.Attach(record.argmax_cluster, record.linkage_bits);
      out.entries.push_back(
          {candidate.fragment, record.argmax_cluster, options.tag});
      if (!options.freeze_counts) {
        cluster_of[static_cast<size_t>(candidate.id)] = record.argmax_cluster;
      }
    }
    result.log.push_back(std::move(record));
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const LexiconEntry& a, const LexiconEntry& b) {
              return a.fragment.text < b.fragment.text;
            });
  return result;
}

absl::StatusOr<PatternLexicon> ReplayAdmissions(
    const PatternLexicon& base, std::span<const AdmissionRecord> log,
    Provenance tag) {
  PatternLexicon out = base;
  for (const AdmissionRecord& record : log) {
    if (!record.accepted) continue;
    if (record.argmax_cluster < 0 || record.argmax_cluster >= out.n_clusters) {
      return absl::InvalidArgumentError(StrCat(
          "admission of '", record.fragment, "' names an invalid cluster"));
    }
    if (out.graph.Modularity() != record.modularity_before) {
      return absl::FailedPreconditionError(StrCat(
          "modularity before admitting '", record.fragment,
          "' does not match the log"));
    }
    out.graph.Attach(record.argmax_cluster, record.linkage_bits);
    if (out.graph.Modularity() != record.modularity_after) {
      return absl::FailedPreconditionError(StrCat(
          "modularity after admitting '", record.fragment,
          "' does not match the log"));
    }
    auto fragment = Fragment::Parse(record.fragment);
    if (!fragment.ok()) return fragment.status();
    out.entries.push_back({*std::move(fragment), record.argmax_cluster, tag});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const LexiconEntry& a, const LexiconEntry& b) {
              return a.fragment.text < b.fragment.text;
            });
  return out;
}

std::string LexiconToCsv(const PatternLexicon& lexicon) {
  std::string out = "fragment,cluster_id,provenance\n";
  for (const auto& e : lexicon.entries) {
    StrAppend(&out, e.fragment.text, ",", e.cluster, ",",
                    ProvenanceName(e.provenance), "\n");
  }
  return out;
}

absl::StatusOr<PatternLexicon> ParseLexiconCsv(std::string_view text) {
  PatternLexicon lexicon;
  bool header = true;
  std::set<int> clusters;
  for (std::string_view line : Split(text, '\n', true)) {
    line = Trim(line);
    if (header) {
      header = false;
      if (line.starts_with("fragment,")) continue;
    }
    std::vector<std::string_view> fields = Split(line, ',');
    if (fields.size() != 3) {
      return absl::DataLossError(StrCat("bad lexicon line: ", line));
    }
    auto fragment = Fragment::Parse(fields[0]);
    if (!fragment.ok()) return fragment.status();
    auto cluster = ParseInt<int>(fields[1]);
    if (!cluster || *cluster < 0) {
      return absl::DataLossError(StrCat("bad cluster id: ", line));
    }
    auto provenance = ParseProvenance(fields[2]);
    if (!provenance.ok()) return provenance.status();
    clusters.insert(*cluster);
    lexicon.entries.push_back({*std::move(fragment), *cluster, *provenance});
  }
  if (lexicon.entries.empty()) {
    return absl::InvalidArgumentError("lexicon is empty");
  }
  lexicon.n_clusters = *clusters.rbegin() + 1;
  if (static_cast<int>(clusters.size()) != lexicon.n_clusters) {
    return absl::DataLossError("lexicon cluster ids are not contiguous");
  }
  std::sort(lexicon.entries.begin(), lexicon.entries.end(),
            [](const LexiconEntry& a, const LexiconEntry& b) {
              return a.fragment.text < b.fragment.text;
            });
  for (size_t i = 1; i < lexicon.entries.size(); ++i) {
    if (lexicon.entries[i].fragment == lexicon.entries[i - 1].fragment) {
      return absl::DataLossError(StrCat(
          "fragment '", lexicon.entries[i].fragment.text, "' listed twice"));
    }
  }
  return lexicon;
}

std::string LexiconToJson(const PatternLexicon& lexicon) {
  nlohmann::ordered_json j;
  j["n_clusters"] = lexicon.n_clusters;
  auto& entries = j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : lexicon.entries) {
    entries.push_back(nlohmann::ordered_json::array(
        {e.fragment.text, e.cluster, std::string(ProvenanceName(e.provenance))}));
  }
  j["graph"]["internal"] = lexicon.graph.internal;
  j["graph"]["strength"] = lexicon.graph.strength;
  j["graph"]["total_weight"] = lexicon.graph.total_weight;
  j["graph"]["resolution"] = lexicon.graph.resolution;
  auto& names = j["names"] = nlohmann::ordered_json::object();
  for (const auto& [id, name] : lexicon.names) names[std::to_string(id)] = name;
  return j.dump(1) + "\n";
}

absl::StatusOr<PatternLexicon> ParseLexiconJson(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) return absl::DataLossError("lexicon JSON is corrupt");
  try {
    PatternLexicon lexicon;
    lexicon.n_clusters = j.at("n_clusters").get<int>();
    for (const auto& e : j.at("entries")) {
      auto fragment = Fragment::Parse(e.at(0).get<std::string>());
      if (!fragment.ok()) return fragment.status();
      auto provenance = ParseProvenance(e.at(2).get<std::string>());
      if (!provenance.ok()) return provenance.status();
      lexicon.entries.push_back(
          {*std::move(fragment), e.at(1).get<int>(), *provenance});
    }
    const auto& g = j.at("graph");
    lexicon.graph.internal = g.at("internal").get<std::vector<double>>();
    lexicon.graph.strength = g.at("strength").get<std::vector<double>>();
    lexicon.graph.total_weight = g.at("total_weight").get<double>();
    lexicon.graph.resolution = g.at("resolution").get<double>();
    for (const auto& [key, value] : j.at("names").items()) {
      auto id = ParseInt<int>(key);
      if (!id) return absl::DataLossError("bad pattern name key");
      lexicon.names[*id] = value.get<std::string>();
    }
    return lexicon;
  } catch (const nlohmann::json::exception& e) {
    return absl::DataLossError(StrCat("lexicon JSON: ", e.what()));
  }
}

std::string AdmissionLogToCsv(std::span<const AdmissionRecord> log) {
  std::string out =
      "fragment,argmax_cluster,linkage_bits,modularity_before,"
      "modularity_after,accepted\n";
  for (const auto& r : log) {
    StrAppend(&out, r.fragment, ",", r.argmax_cluster, ",",
                    FormatDouble(r.linkage_bits), ",",
                    FormatDouble(r.modularity_before), ",",
                    FormatDouble(r.modularity_after), ",",
                    r.accepted ? "true" : "false", "\n");
  }
  return out;
}

absl::StatusOr<std::vector<AdmissionRecord>> ParseAdmissionLogCsv(
    std::string_view text) {
  std::vector<AdmissionRecord> log;
  bool header = true;
  for (std::string_view line : Split(text, '\n', true)) {
    if (header) {
      header = false;
      if (line.starts_with("fragment,")) continue;
    }
    std::vector<std::string_view> f = Split(line, ',');
    if (f.size() != 6) {
      return absl::DataLossError(StrCat("bad admission line: ", line));
    }
    AdmissionRecord r;
    r.fragment = std::string(f[0]);
    auto cluster = ParseInt<int>(f[1]);
    auto bits = ParseDouble(f[2]);
    auto before = ParseDouble(f[3]);
    auto after = ParseDouble(f[4]);
    if (!cluster || !bits || !before || !after ||
        (f[5] != "true" && f[5] != "false")) {
      return absl::DataLossError(StrCat("bad admission line: ", line));
    }
    r.argmax_cluster = *cluster;
    r.linkage_bits = *bits;
    r.modularity_before = *before;
    r.modularity_after = *after;
    r.accepted = f[5] == "true";
    log.push_back(std::move(r));
  }
  return log;
}

}  // namespace argpat
