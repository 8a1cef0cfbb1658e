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

#include "argpat/linkage.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "argpat/text.h"

namespace argpat {
namespace {

struct PairKey {
  FragmentId a;
  FragmentId b;
  uint32_t length;

  friend bool operator==(const PairKey&, const PairKey&) = default;
};

struct PairKeyHash {
  size_t operator()(const PairKey& k) const {
    uint64_t h = (static_cast<uint64_t>(static_cast<uint32_t>(k.a)) << 32) |
                 static_cast<uint32_t>(k.b);
    h ^= static_cast<uint64_t>(k.length) * 0x9e3779b97f4a7c15ULL;
    h ^= h >> 29;
    return static_cast<size_t>(h * 0xbf58476d1ce4e5b9ULL);
  }
};

}  // namespace

double LengthGroupedMean::Mean(int power, size_t num_docs) {
  if (num_docs == 0) return 0.0;
  std::sort(terms_.begin(), terms_.end());
  double sum = 0.0;
  size_t i = 0;
  while (i < terms_.size()) {
    const uint32_t length = terms_[i].first;
    uint64_t numerator = 0;
    for (; i < terms_.size() && terms_[i].first == length; ++i) {
      numerator += terms_[i].second;
    }
    double denominator = static_cast<double>(length);
    if (power == 2) denominator *= denominator;
    sum += static_cast<double>(numerator) / denominator;
  }
  return sum / static_cast<double>(num_docs);
}

absl::StatusOr<FragmentCounts> FragmentCounts::Count(
    std::span<const TokenStream> docs, std::span<const Fragment> fragments) {
  if (fragments.empty()) {
    return absl::InvalidArgumentError("fragment set is empty");
  }
  FragmentCounts counts;
  std::set<Fragment> unique(fragments.begin(), fragments.end());
  counts.fragments_.assign(unique.begin(), unique.end());
  StringMap<FragmentId> by_token;
  for (size_t i = 0; i < counts.fragments_.size(); ++i) {
    const auto id = static_cast<FragmentId>(i);
    counts.by_text_.emplace(counts.fragments_[i].text, id);
    by_token.emplace(counts.fragments_[i].Token(), id);
  }
  counts.postings_.resize(counts.fragments_.size());
  counts.frequency_.assign(counts.fragments_.size(), 0);
  counts.doc_offset_.push_back(0);

  std::map<FragmentId, uint32_t> local;
  for (const TokenStream& doc : docs) {
    local.clear();
    for (const std::string& token : doc.tokens) {
      auto it = by_token.find(token);
      if (it != by_token.end()) ++local[it->second];
    }
    if (local.empty()) continue;
    const auto doc_index = static_cast<uint32_t>(counts.doc_ids_.size());
    uint32_t length = 0;
    for (const auto& [id, n] : local) {
      counts.occurrences_.push_back({id, n});
      counts.postings_[id].push_back({doc_index, n});
      counts.frequency_[id] += n;
      length += n;
    }
    counts.doc_ids_.push_back(doc.doc_id);
    counts.doc_length_.push_back(length);
    counts.doc_offset_.push_back(counts.occurrences_.size());
  }

  counts.marginal_.resize(counts.fragments_.size());
  for (size_t i = 0; i < counts.fragments_.size(); ++i) {
    LengthGroupedMean mean;
    for (const Posting& p : counts.postings_[i]) {
      mean.Add(counts.doc_length_[p.doc], p.count);
    }
    counts.marginal_[i] = mean.Mean(1, counts.num_docs());
  }
  return counts;
}

std::optional<FragmentId> FragmentCounts::Find(std::string_view text) const {
  auto it = by_text_.find(text);
  if (it == by_text_.end()) return std::nullopt;
  return it->second;
}

std::span<const Occurrence> FragmentCounts::occurrences(size_t doc) const {
  return std::span<const Occurrence>(occurrences_)
      .subspan(doc_offset_[doc], doc_offset_[doc + 1] - doc_offset_[doc]);
}

uint32_t FragmentCounts::CountIn(FragmentId id, size_t doc) const {
  auto occ = occurrences(doc);
  auto it = std::lower_bound(
      occ.begin(), occ.end(), id,
      [](const Occurrence& o, FragmentId f) { return o.fragment < f; });
  return it != occ.end() && it->fragment == id ? it->count : 0;
}

double MarginalProb(const FragmentCounts& counts, FragmentId i) {
  return counts.marginal(i);
}

absl::StatusOr<double> MarginalProb(const FragmentCounts& counts,
                                    std::string_view fragment) {
  auto id = counts.Find(fragment);
  if (!id) {
    return absl::NotFoundError(StrCat("unknown fragment '", fragment, "'"));
  }
  return MarginalProb(counts, *id);
}

double JointProb(const FragmentCounts& counts, FragmentId i, FragmentId j) {
  // Walk the shorter posting list.
  if (counts.document_frequency(j) < counts.document_frequency(i)) {
    std::swap(i, j);
  }
  LengthGroupedMean mean;
  for (const Posting& p : counts.postings(i)) {
    const uint32_t other = counts.CountIn(j, p.doc);
    if (other > 0) {
      mean.Add(counts.doc_length(p.doc),
               static_cast<uint64_t>(p.count) * other);
    }
  }
  return mean.Mean(2, counts.num_docs());
}

absl::StatusOr<double> JointProb(const FragmentCounts& counts,
                                 std::string_view a, std::string_view b) {
  auto i = counts.Find(a);
  auto j = counts.Find(b);
  if (!i || !j) {
    return absl::NotFoundError(
        StrCat("unknown fragment '", !i ? a : b, "'"));
  }
  if (*i == *j) {
    return absl::InvalidArgumentError("joint probability needs two fragments");
  }
  return JointProb(counts, *i, *j);
}

std::optional<double> Linkage(const FragmentCounts& counts, FragmentId i,
                              FragmentId j) {
  const double joint = JointProb(counts, i, j);
  if (joint <= 0.0) return std::nullopt;
  return std::log2(joint / (counts.marginal(i) * counts.marginal(j)));
}

absl::StatusOr<std::optional<double>> Linkage(const FragmentCounts& counts,
                                              std::string_view a,
                                              std::string_view b) {
  auto i = counts.Find(a);
  auto j = counts.Find(b);
  if (!i || !j) {
    return absl::NotFoundError(
        StrCat("unknown fragment '", !i ? a : b, "'"));
  }
  if (*i == *j) return absl::InvalidArgumentError("linkage needs two fragments");
  return Linkage(counts, *i, *j);
}

std::optional<int32_t> LinkageNetwork::NodeIndex(std::string_view text) const {
  auto it = std::lower_bound(
      nodes.begin(), nodes.end(), text,
      [](const Fragment& f, std::string_view t) { return f.text < t; });
  if (it == nodes.end() || it->text != text) return std::nullopt;
  return static_cast<int32_t>(it - nodes.begin());
}

double LinkageNetwork::TotalWeight() const {
  double total = 0.0;
  for (const auto& e : edges) total += e.weight;
  return total;
}

absl::StatusOr<LinkageNetwork> BuildNetwork(const FragmentCounts& counts,
                                            uint32_t min_df) {
  if (min_df < 1) return absl::InvalidArgumentError("min_df must be >= 1");
  LinkageNetwork network;
  std::vector<int32_t> node_of(counts.num_fragments(), -1);
  for (size_t i = 0; i < counts.num_fragments(); ++i) {
    const auto id = static_cast<FragmentId>(i);
    if (counts.document_frequency(id) >= min_df) {
      node_of[i] = static_cast<int32_t>(network.nodes.size());
      network.nodes.push_back(counts.fragment(id));
    }
  }
  if (network.nodes.empty()) {
    return absl::FailedPreconditionError(StrCat(
        "no fragment reaches document frequency ", min_df));
  }

  std::unordered_map<PairKey, uint64_t, PairKeyHash> numerators;
  for (size_t d = 0; d < counts.num_docs(); ++d) {
    const auto occ = counts.occurrences(d);
    const uint32_t length = counts.doc_length(d);
    for (size_t x = 0; x < occ.size(); ++x) {
      if (node_of[occ[x].fragment] < 0) continue;
      for (size_t y = x + 1; y < occ.size(); ++y) {
        if (node_of[occ[y].fragment] < 0) continue;
        numerators[{occ[x].fragment, occ[y].fragment, length}] +=
            static_cast<uint64_t>(occ[x].count) * occ[y].count;
      }
    }
  }
  std::vector<std::pair<PairKey, uint64_t>> terms(numerators.begin(),
                                                  numerators.end());
  std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
    return std::tie(x.first.a, x.first.b, x.first.length) <
           std::tie(y.first.a, y.first.b, y.first.length);
  });

  size_t t = 0;
  while (t < terms.size()) {
    const FragmentId a = terms[t].first.a;
    const FragmentId b = terms[t].first.b;
    LengthGroupedMean mean;
    for (; t < terms.size() && terms[t].first.a == a && terms[t].first.b == b;
         ++t) {
      mean.Add(terms[t].first.length, terms[t].second);
    }
    const double joint = mean.Mean(2, counts.num_docs());
    if (joint <= 0.0) continue;
    const double bits =
        std::log2(joint / (counts.marginal(a) * counts.marginal(b)));
    if (bits > 0.0) {
      network.edges.push_back({node_of[a], node_of[b], bits});
    }
  }
  // Fragment ids and node indices share the same order, so edges are
  // already sorted by (u, v).
  return network;
}

std::optional<int> ClusterLinkageDetail::BestCluster() const {
  std::optional<int> best;
  for (size_t k = 0; k < bits.size(); ++k) {
    if (!bits[k]) continue;
    if (!best || *bits[k] > *bits[*best]) best = static_cast<int>(k);
  }
  return best;
}

absl::StatusOr<ClusterLinkageDetail> ClusterLinkage(
    const FragmentCounts& counts, std::span<const int> cluster_of,
    int n_clusters, FragmentId j) {
  if (cluster_of.size() != counts.num_fragments()) {
    return absl::InvalidArgumentError(
        "cluster_of must cover every fragment id");
  }
  if (counts.document_frequency(j) == 0) {
    return absl::FailedPreconditionError(StrCat(
        "fragment '", counts.fragment(j).text, "' occurs in no document"));
  }
  const auto k_count = static_cast<size_t>(n_clusters);
  ClusterLinkageDetail detail;
  detail.prior.assign(k_count, 0.0);
  detail.conditional.assign(k_count, 0.0);
  detail.bits.assign(k_count, std::nullopt);

  // P(C_k) = sum over members of P(w_i), since N(C_k, d) is the sum of the
  // members' counts.
  for (size_t i = 0; i < counts.num_fragments(); ++i) {
    const int k = cluster_of[i];
    if (k >= 0) detail.prior[static_cast<size_t>(k)] += counts.marginal(
        static_cast<FragmentId>(i));
  }

  std::vector<uint64_t> in_doc(k_count);
  for (const Posting& p : counts.postings(j)) {
    std::fill(in_doc.begin(), in_doc.end(), 0);
    for (const Occurrence& o : counts.occurrences(p.doc)) {
      const int k = cluster_of[o.fragment];
      if (k >= 0) in_doc[static_cast<size_t>(k)] += o.count;
    }
    const double length = counts.doc_length(p.doc);
    for (size_t k = 0; k < k_count; ++k) {
      if (in_doc[k] > 0) {
        detail.conditional[k] +=
            static_cast<double>(in_doc[k]) * p.count / length;
      }
    }
  }
  double z = 0.0;
  for (double c : detail.conditional) z += c;
  if (z <= 0.0) return detail;
  for (size_t k = 0; k < k_count; ++k) {
    detail.conditional[k] /= z;
    if (detail.conditional[k] > 0.0) {
      detail.bits[k] = std::log2(detail.conditional[k] / detail.prior[k]);
    }
  }
  return detail;
}

std::string NetworkToTsv(const LinkageNetwork& network) {
  std::string out;
  for (const auto& e : network.edges) {
    StrAppend(&out, network.nodes[e.u].text, "\t",
                    network.nodes[e.v].text, "\t", FormatDouble(e.weight),
                    "\n");
  }
  return out;
}

std::string NetworkNodesToText(const LinkageNetwork& network) {
  std::string out;
  for (const auto& node : network.nodes) StrAppend(&out, node.text, "\n");
  return out;
}

absl::StatusOr<LinkageNetwork> ParseNetworkTsv(std::string_view edges_tsv,
                                               std::string_view nodes_text) {
  std::vector<std::tuple<std::string, std::string, double>> rows;
  std::set<Fragment> nodes;
  for (std::string_view line :
       Split(nodes_text, '\n', true)) {
    auto f = Fragment::Parse(line);
    if (!f.ok()) return f.status();
    nodes.insert(*std::move(f));
  }
  for (std::string_view line :
       Split(edges_tsv, '\n', true)) {
    std::vector<std::string_view> fields = Split(line, '\t');
    if (fields.size() != 3) {
      return absl::DataLossError(StrCat("bad edge line: ", line));
    }
    auto a = Fragment::Parse(fields[0]);
    auto b = Fragment::Parse(fields[1]);
    auto w = ParseDouble(fields[2]);
    if (!a.ok() || !b.ok() || !w || !(*w > 0.0)) {
      return absl::DataLossError(StrCat("bad edge line: ", line));
    }
    rows.emplace_back(a->text, b->text, *w);
    nodes.insert(*a);
    nodes.insert(*b);
  }
  LinkageNetwork network;
  network.nodes.assign(nodes.begin(), nodes.end());
  for (const auto& [a, b, w] : rows) {
    int32_t u = *network.NodeIndex(a);
    int32_t v = *network.NodeIndex(b);
    if (u == v) return absl::DataLossError("self-loop in network file");
    if (u > v) std::swap(u, v);
    network.edges.push_back({u, v, w});
  }
  std::sort(network.edges.begin(), network.edges.end(),
            [](const LinkageEdge& x, const LinkageEdge& y) {
              return std::tie(x.u, x.v) < std::tie(y.u, y.v);
            });
  return network;
}

std::string CountsToTsv(const FragmentCounts& counts) {
  std::string out = "fragment\tfrequency\tdocument_frequency\tmarginal\n";
  for (size_t i = 0; i < counts.num_fragments(); ++i) {
    const auto id = static_cast<FragmentId>(i);
    StrAppend(&out, counts.fragment(id).text, "\t", counts.frequency(id),
                    "\t", counts.document_frequency(id), "\t",
                    FormatDouble(counts.marginal(id)), "\n");
  }
  return out;
}

}  // namespace argpat
