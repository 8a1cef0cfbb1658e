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

#ifndef ARGPAT_LINKAGE_H_
#define ARGPAT_LINKAGE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "argpat/phrases.h"
#include "argpat/tokenize.h"

namespace argpat {

using FragmentId = int32_t;

struct Occurrence {
  FragmentId fragment;
  uint32_t count;
};

struct Posting {
  uint32_t doc;
  uint32_t count;
};

// Fragment occurrence counts over fragment-filtered documents.
//
// Each input document is reduced to its fragment tokens; documents left
// with no fragment occurrence are dropped, so num_docs() is the size of the
// document set all probabilities average over. Fragment ids follow the
// lexicographic order of fragment text.
class FragmentCounts {
 public:
  // `docs` must already be phrase-merged (bigrams as "a_b" tokens).
  static absl::StatusOr<FragmentCounts> Count(
      std::span<const TokenStream> docs, std::span<const Fragment> fragments);

  size_t num_docs() const { return doc_ids_.size(); }
  size_t num_fragments() const { return fragments_.size(); }

  const Fragment& fragment(FragmentId id) const { return fragments_[id]; }
  const std::vector<Fragment>& fragments() const { return fragments_; }
  std::optional<FragmentId> Find(std::string_view text) const;

  uint64_t frequency(FragmentId id) const { return frequency_[id]; }
  uint32_t document_frequency(FragmentId id) const {
    return static_cast<uint32_t>(postings_[id].size());
  }
  std::span<const Posting> postings(FragmentId id) const {
    return postings_[id];
  }

  // Occurrences in document d sorted by fragment id.
  std::span<const Occurrence> occurrences(size_t doc) const;
  uint32_t doc_length(size_t doc) const { return doc_length_[doc]; }
  const std::string& doc_id(size_t doc) const { return doc_ids_[doc]; }

  // N(w, d) for fragment w in document d; 0 when absent.
  uint32_t CountIn(FragmentId id, size_t doc) const;

  // Mean per-document frequency, precomputed.
  double marginal(FragmentId id) const { return marginal_[id]; }

 private:
  std::vector<Fragment> fragments_;
  StringMap<FragmentId> by_text_;
  std::vector<std::string> doc_ids_;
  std::vector<uint32_t> doc_length_;
  std::vector<size_t> doc_offset_;  // Into occurrences_, size num_docs + 1.
  std::vector<Occurrence> occurrences_;
  std::vector<std::vector<Posting>> postings_;
  std::vector<uint64_t> frequency_;
  std::vector<double> marginal_;
};

// Sum over documents of numerator / length^power, divided by the document
// count. Numerators are integers grouped by document length and the groups
// are added in ascending length, so duplicating every document leaves the
// result bit-identical.
class LengthGroupedMean {
 public:
  void Add(uint32_t length, uint64_t numerator) {
    terms_.emplace_back(length, numerator);
  }
  double Mean(int power, size_t num_docs);

 private:
  std::vector<std::pair<uint32_t, uint64_t>> terms_;
};

// P(w) = (1/|D|) sum_d N(w,d) / N(d).
double MarginalProb(const FragmentCounts& counts, FragmentId i);
absl::StatusOr<double> MarginalProb(const FragmentCounts& counts,
                                    std::string_view fragment);

// P(w_i, w_j) = (1/|D|) sum_d N(w_i,d) N(w_j,d) / N(d)^2.
double JointProb(const FragmentCounts& counts, FragmentId i, FragmentId j);
absl::StatusOr<double> JointProb(const FragmentCounts& counts,
                                 std::string_view a, std::string_view b);

// log2(P(w_i,w_j) / (P(w_i) P(w_j))) in bits; nullopt when the joint
// probability is zero (no edge).
std::optional<double> Linkage(const FragmentCounts& counts, FragmentId i,
                              FragmentId j);
absl::StatusOr<std::optional<double>> Linkage(const FragmentCounts& counts,
                                              std::string_view a,
                                              std::string_view b);

struct LinkageEdge {
  int32_t u = 0;  // u < v, indices into LinkageNetwork::nodes.
  int32_t v = 0;
  double weight = 0.0;  // Bits, always > 0.

  friend bool operator==(const LinkageEdge&, const LinkageEdge&) = default;
};

struct LinkageNetwork {
  std::vector<Fragment> nodes;     // Lexicographic.
  std::vector<LinkageEdge> edges;  // Sorted by (u, v).

  std::optional<int32_t> NodeIndex(std::string_view text) const;
  double TotalWeight() const;
};

// Nodes are fragments with document frequency >= min_df; edges are the
// pairs with strictly positive linkage.
absl::StatusOr<LinkageNetwork> BuildNetwork(const FragmentCounts& counts,
                                            uint32_t min_df);

struct ClusterLinkageDetail {
  std::vector<double> prior;        // P(C_k)
  std::vector<double> conditional;  // P(C_k | w_j), sums to 1 over k.
  // log2(conditional / prior); nullopt where conditional is zero.
  std::vector<std::optional<double>> bits;

  // argmax over defined bits, ties to the lowest cluster id.
  std::optional<int> BestCluster() const;
};

// Linkage between fragment j and each cluster. `cluster_of` maps every
// FragmentId to a cluster id, or -1 when the fragment is unclustered.
// Conditional mass is weighted by N(w_j, d) / N(d) over the documents
// containing j and normalized over clusters. If j never co-occurs with a
// clustered fragment every entry of `bits` is nullopt.
absl::StatusOr<ClusterLinkageDetail> ClusterLinkage(
    const FragmentCounts& counts, std::span<const int> cluster_of,
    int n_clusters, FragmentId j);

// TSV: frag_i<TAB>frag_j<TAB>linkage_bits.
std::string NetworkToTsv(const LinkageNetwork& network);
// One node per line; keeps fragments that have no edge.
std::string NetworkNodesToText(const LinkageNetwork& network);
absl::StatusOr<LinkageNetwork> ParseNetworkTsv(std::string_view edges_tsv,
                                               std::string_view nodes_text = {});

// TSV: fragment<TAB>frequency<TAB>document_frequency<TAB>marginal.
std::string CountsToTsv(const FragmentCounts& counts);

}  // namespace argpat

#endif  // ARGPAT_LINKAGE_H_
