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

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <set>

#include "argpat/rng.h"
#include "oracles/oracles.h"
#include "test_util.h"

namespace argpat {
namespace {

using testing::Streams;

LinkageNetwork Graph(int n, const std::vector<oracle::Edge>& edges) {
  LinkageNetwork net;
  for (int i = 0; i < n; ++i) {
    net.nodes.push_back(Fragment::FromToken(StrCat("n", i < 10 ? "0" : "", i)));
  }
  for (const auto& e : edges) {
    net.edges.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.w});
  }
  std::sort(net.edges.begin(), net.edges.end(),
            [](const LinkageEdge& a, const LinkageEdge& b) {
              return std::pair(a.u, a.v) < std::pair(b.u, b.v);
            });
  return net;
}

std::vector<oracle::Edge> TwoTriangles() {
  return {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}};
}

TEST(ModularityTest, SingleClusterIsZero) {
  LinkageNetwork net = Graph(6, TwoTriangles());
  EXPECT_NEAR(*Modularity(net, std::vector<int>(6, 0)), 0.0, 1e-15);
}

TEST(ModularityTest, TwoTriangles) {
  LinkageNetwork net = Graph(6, TwoTriangles());
  const std::vector<int> split = {0, 0, 0, 1, 1, 1};
  EXPECT_DOUBLE_EQ(*Modularity(net, split), 0.5);
  EXPECT_DOUBLE_EQ(oracle::Modularity(6, TwoTriangles(), split), 0.5);
  EXPECT_DOUBLE_EQ(oracle::BestModularity(6, TwoTriangles()), 0.5);
  const std::vector<int> broken = {0, 0, 1, 1, 1, 1};
  const double q = *Modularity(net, broken);
  EXPECT_LT(q, 0.5);
  EXPECT_NEAR(q, oracle::Modularity(6, TwoTriangles(), broken), 1e-12);
}

TEST(ModularityTest, Errors) {
  EXPECT_FALSE(Modularity(Graph(3, {}), std::vector<int>{0, 1, 2}).ok());
  EXPECT_FALSE(Modularity(Graph(6, TwoTriangles()), std::vector<int>{0}).ok());
}

TEST(LouvainTest, TwoTriangles) {
  auto p = Louvain(Graph(6, TwoTriangles()), 1);
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->n_clusters, 2);
  EXPECT_EQ(p->assignment, (std::vector<int>{0, 0, 0, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(p->modularity, 0.5);
}

TEST(LouvainTest, EmptyNetworkIsError) {
  EXPECT_FALSE(Louvain(LinkageNetwork{}, 1).ok());
}

std::vector<oracle::Edge> PlantedBlocks(uint64_t seed, std::vector<int>* truth) {
  Rng rng(seed);
  std::vector<oracle::Edge> edges;
  truth->clear();
  for (int i = 0; i < 30; ++i) truth->push_back(i / 10);
  for (int i = 0; i < 30; ++i) {
    for (int j = i + 1; j < 30; ++j) {
      const bool same = (*truth)[i] == (*truth)[j];
      if (same && rng.Bernoulli(0.8)) {
        edges.push_back({i, j, 2.0 + rng.Uniform()});
      } else if (!same && rng.Bernoulli(0.1)) {
        edges.push_back({i, j, 0.2 * rng.Uniform() + 0.01});
      }
    }
  }
  return edges;
}

TEST(LouvainTest, RecoversPlantedBlocks) {
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    std::vector<int> truth;
    auto edges = PlantedBlocks(seed, &truth);
    auto p = Louvain(Graph(30, edges), seed);
    ASSERT_TRUE(p.ok());
    EXPECT_EQ(p->n_clusters, 3);
    EXPECT_DOUBLE_EQ(oracle::AdjustedRand(p->assignment, truth), 1.0);
  }
}

TEST(LouvainTest, DeterministicAndOrdered) {
  std::vector<int> truth;
  LinkageNetwork net = Graph(30, PlantedBlocks(9, &truth));
  auto a = Louvain(net, 77);
  auto b = Louvain(net, 77);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(*a, *b);
  std::vector<int> sizes(a->n_clusters, 0);
  for (int c : a->assignment) ++sizes[c];
  EXPECT_TRUE(std::is_sorted(sizes.rbegin(), sizes.rend()));
  EXPECT_DOUBLE_EQ(a->modularity, *Modularity(net, a->assignment));
}

TEST(LouvainTest, MatchesExhaustiveOptimumOnSmallGraphs) {
  Rng rng(123);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(rng.UniformInt(6));
    std::vector<oracle::Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.Bernoulli(0.45)) edges.push_back({i, j, 0.1 + rng.Uniform()});
      }
    }
    if (edges.empty()) continue;
    auto p = Louvain(Graph(n, edges), trial);
    ASSERT_TRUE(p.ok());
    EXPECT_NEAR(p->modularity, oracle::BestModularity(n, edges), 1e-9)
        << "trial " << trial;
    EXPECT_GE(p->modularity,
              oracle::Modularity(n, edges, [&] {
                std::vector<int> s(n);
                std::iota(s.begin(), s.end(), 0);
                return s;
              }()) - 1e-12);
  }
}

TEST(RefinePartitionTest, FixedPoint) {
  LinkageNetwork net = Graph(6, TwoTriangles());
  auto p = Louvain(net, 3);
  ASSERT_TRUE(p.ok());
  auto r = RefinePartition(net, *p, 5);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r, *p);
}

TEST(RefinePartitionTest, RepairsMisassignedNode) {
  LinkageNetwork net = Graph(6, TwoTriangles());
  Partition bad;
  bad.assignment = {0, 0, 1, 1, 1, 1};
  bad.n_clusters = 2;
  bad.modularity = *Modularity(net, bad.assignment);
  auto r = RefinePartition(net, bad, 5);
  ASSERT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r->modularity, 0.5);
  EXPECT_DOUBLE_EQ(oracle::AdjustedRand(r->assignment, {0, 0, 0, 1, 1, 1}),
                   1.0);
}

TEST(RefinePartitionTest, NeverLowersModularity) {
  std::vector<int> truth;
  LinkageNetwork net = Graph(30, PlantedBlocks(4, &truth));
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    Partition p;
    p.n_clusters = 5;
    for (int i = 0; i < 30; ++i) {
      p.assignment.push_back(static_cast<int>(rng.UniformInt(5)));
    }
    p.modularity = *Modularity(net, p.assignment);
    auto r = RefinePartition(net, p, trial);
    ASSERT_TRUE(r.ok());
    EXPECT_GE(r->modularity, p.modularity);
    EXPECT_DOUBLE_EQ(r->modularity, *Modularity(net, r->assignment));
  }
}

// Two seed clusters {a,b} and {c,d}; the candidate j only ever appears
// next to cluster {c,d}.
struct AdmissionFixture {
  std::vector<std::vector<std::string>> docs = {
      {"a", "b"}, {"a", "b"}, {"c", "d"}, {"c", "d"}, {"c", "d", "j"},
      {"c", "d", "j"}};
  std::vector<TokenStream> streams = Streams(docs);
  LinkageNetwork network;
  PatternLexicon lexicon;

  AdmissionFixture() {
    std::vector<Fragment> seeds;
    for (const char* t : {"a", "b", "c", "d"}) seeds.push_back(Fragment::FromToken(t));
    auto seed_counts = FragmentCounts::Count(streams, seeds);
    network = *BuildNetwork(*seed_counts, 1);
    auto partition = Louvain(network, 1);
    lexicon = *BuildLexicon(network, *partition);
  }

  FragmentCounts Counts(const std::vector<std::string>& extra) const {
    std::vector<Fragment> all;
    for (const char* t : {"a", "b", "c", "d"}) all.push_back(Fragment::FromToken(t));
    for (const auto& t : extra) all.push_back(Fragment::FromToken(t));
    return *FragmentCounts::Count(streams, all);
  }
};

TEST(ExpandLexiconTest, CandidateJoinsItsCluster) {
  AdmissionFixture f;
  ASSERT_EQ(f.lexicon.n_clusters, 2);
  EXPECT_EQ(f.lexicon.Find("a")->cluster, 0);
  EXPECT_EQ(f.lexicon.Find("c")->cluster, 1);

  FragmentCounts counts = f.Counts({"j"});
  const std::vector<Fragment> candidates = {Fragment::FromToken("j")};
  auto result = ExpandLexicon(counts, f.lexicon, candidates, {});
  ASSERT_TRUE(result.ok()) << result.status();
  ASSERT_EQ(result->log.size(), 1u);
  const AdmissionRecord& rec = result->log[0];

  const std::set<std::string> frags = {"a", "b", "c", "d", "j"};
  auto bits = oracle::ClusterLinkage(f.docs, frags,
                                     {{"a", 0}, {"b", 0}, {"c", 1}, {"d", 1}},
                                     2, "j");
  EXPECT_FALSE(bits[0].has_value());
  ASSERT_TRUE(bits[1].has_value());
  EXPECT_EQ(rec.argmax_cluster, 1);
  EXPECT_NEAR(rec.linkage_bits, *bits[1], 1e-12);

  // The cluster graph keeps per-cluster weight and degree, so attaching j
  // to any member of its cluster gives the same modularity.
  std::vector<oracle::Edge> edges;
  for (const auto& e : f.network.edges) edges.push_back({e.u, e.v, e.weight});
  const int c = *f.network.NodeIndex("c");
  std::vector<int> before(f.network.nodes.size());
  for (size_t i = 0; i < before.size(); ++i) {
    before[i] = f.lexicon.Find(f.network.nodes[i].text)->cluster;
  }
  const int n = static_cast<int>(before.size());
  const double q_before = oracle::Modularity(n, edges, before);
  auto after = before;
  after.push_back(1);
  edges.push_back({c, n, *bits[1]});
  const double q_after = oracle::Modularity(n + 1, edges, after);
  EXPECT_NEAR(rec.modularity_before, q_before, 1e-12);
  EXPECT_NEAR(rec.modularity_after, q_after, 1e-12);
  EXPECT_GT(q_after, q_before);
  EXPECT_TRUE(rec.accepted);
  ASSERT_NE(result->lexicon.Find("j"), nullptr);
  EXPECT_EQ(result->lexicon.Find("j")->cluster, 1);
  EXPECT_EQ(result->lexicon.Find("j")->provenance, Provenance::kCogproc);
  for (const char* t : {"a", "b", "c", "d"}) {
    EXPECT_EQ(result->lexicon.Find(t)->cluster, f.lexicon.Find(t)->cluster);
  }
}

TEST(ExpandLexiconTest, ZeroWeightLinkCannotRaiseModularity) {
  AdmissionFixture f;
  for (int k = 0; k < f.lexicon.n_clusters; ++k) {
    EXPECT_EQ(f.lexicon.graph.ModularityWith(k, 0.0),
              f.lexicon.graph.Modularity());
  }
}

TEST(ExpandLexiconTest, UnlinkedAndUnknownCandidates) {
  AdmissionFixture f;
  f.docs.push_back({"lonely"});
  f.streams = Streams(f.docs);
  FragmentCounts counts = f.Counts({"lonely"});
  const std::vector<Fragment> candidates = {Fragment::FromToken("lonely"),
                                            Fragment::FromToken("ghost"),
                                            Fragment::FromToken("a")};
  auto result = ExpandLexicon(counts, f.lexicon, candidates, {});
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result->log.size(), 1u);
  EXPECT_FALSE(result->log[0].accepted);
  EXPECT_EQ(result->log[0].argmax_cluster, -1);
  EXPECT_EQ(result->skipped.size(), 2u);
  EXPECT_EQ(result->lexicon.entries, f.lexicon.entries);
}

TEST(ExpandLexiconTest, ReplayAndSerializationRoundTrip) {
  AdmissionFixture f;
  FragmentCounts counts = f.Counts({"j"});
  const std::vector<Fragment> candidates = {Fragment::FromToken("j")};
  auto result = ExpandLexicon(counts, f.lexicon, candidates, {});
  ASSERT_TRUE(result.ok());

  auto log = ParseAdmissionLogCsv(AdmissionLogToCsv(result->log));
  ASSERT_TRUE(log.ok()) << log.status();
  EXPECT_EQ(*log, result->log);
  auto replay = ReplayAdmissions(f.lexicon, *log, Provenance::kCogproc);
  ASSERT_TRUE(replay.ok());
  EXPECT_EQ(*replay, result->lexicon);

  auto json = ParseLexiconJson(LexiconToJson(result->lexicon));
  ASSERT_TRUE(json.ok()) << json.status();
  EXPECT_EQ(*json, result->lexicon);

  auto csv = ParseLexiconCsv(LexiconToCsv(result->lexicon));
  ASSERT_TRUE(csv.ok()) << csv.status();
  EXPECT_EQ(csv->entries, result->lexicon.entries);
  EXPECT_EQ(csv->n_clusters, result->lexicon.n_clusters);
}

TEST(ProvenanceTest, NamesRoundTrip) {
  for (Provenance p : {Provenance::kSeed, Provenance::kBigram,
                       Provenance::kCogproc, Provenance::kExternal}) {
    EXPECT_EQ(*ParseProvenance(ProvenanceName(p)), p);
  }
  EXPECT_FALSE(ParseProvenance("bogus").ok());
}

}  // namespace
}  // namespace argpat
