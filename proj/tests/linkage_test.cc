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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "argpat/rng.h"
#include "oracles/oracles.h"
#include "test_util.h"

namespace argpat {
namespace {

using testing::Streams;

std::vector<Fragment> Frags(const std::set<std::string>& texts) {
  std::vector<Fragment> out;
  for (const auto& t : texts) out.push_back(Fragment::FromToken(t));
  return out;
}

FragmentCounts CountOrDie(const std::vector<std::vector<std::string>>& docs,
                          const std::set<std::string>& frags) {
  auto streams = Streams(docs);
  auto fragments = Frags(frags);
  auto c = FragmentCounts::Count(streams, fragments);
  EXPECT_TRUE(c.ok()) << c.status();
  return *std::move(c);
}

TEST(FragmentCountsTest, FilterSemantics) {
  FragmentCounts c = CountOrDie({{"a", "x", "b"}, {"x", "y"}}, {"a", "b"});
  ASSERT_EQ(c.num_docs(), 1u);
  EXPECT_EQ(c.doc_id(0), "d0");
  EXPECT_EQ(c.doc_length(0), 2u);
  EXPECT_EQ(c.CountIn(*c.Find("a"), 0), 1u);
  EXPECT_EQ(c.CountIn(*c.Find("b"), 0), 1u);
}

TEST(FragmentCountsTest, RepeatedFragment) {
  FragmentCounts c = CountOrDie({{"a", "a", "z", "a"}}, {"a"});
  EXPECT_EQ(c.CountIn(*c.Find("a"), 0), 3u);
  EXPECT_EQ(c.frequency(*c.Find("a")), 3u);
}

TEST(FragmentCountsTest, EmptyFragmentSetIsError) {
  auto streams = Streams({{"a"}});
  EXPECT_FALSE(FragmentCounts::Count(streams, {}).ok());
}

std::vector<std::vector<std::string>> RandomDocs(uint64_t seed, int n_docs,
                                                 int vocab) {
  Rng rng(seed);
  std::vector<std::vector<std::string>> docs;
  for (int d = 0; d < n_docs; ++d) {
    std::vector<std::string> doc;
    const int len = 1 + static_cast<int>(rng.UniformInt(8));
    for (int i = 0; i < len; ++i) {
      doc.push_back(StrCat("w", rng.UniformInt(vocab)));
    }
    docs.push_back(doc);
  }
  return docs;
}

TEST(FragmentCountsTest, MatchesLinearScan) {
  auto docs = RandomDocs(5, 5, 6);
  const std::set<std::string> frags = {"w0", "w1", "w2", "w3"};
  FragmentCounts c = CountOrDie(docs, frags);
  auto filtered = oracle::FilterDocs(docs, frags);
  ASSERT_EQ(c.num_docs(), filtered.size());
  for (size_t d = 0; d < filtered.size(); ++d) {
    EXPECT_EQ(c.doc_length(d), filtered[d].size());
    for (const auto& f : frags) {
      EXPECT_EQ(c.CountIn(*c.Find(f), d),
                std::count(filtered[d].begin(), filtered[d].end(), f));
    }
  }
}

TEST(ProbabilityTest, HandValues) {
  const std::vector<std::vector<std::string>> docs = {{"a", "b"}, {"c", "c"}};
  const std::set<std::string> frags = {"a", "b", "c"};
  FragmentCounts c = CountOrDie(docs, frags);
  EXPECT_DOUBLE_EQ(*JointProb(c, "a", "b"), 0.125);
  EXPECT_DOUBLE_EQ(oracle::Joint(docs, frags, "a", "b"), 0.125);
  EXPECT_DOUBLE_EQ(*MarginalProb(c, "a"), 0.25);
  EXPECT_DOUBLE_EQ(oracle::Marginal(docs, frags, "a"), 0.25);
  EXPECT_DOUBLE_EQ(**Linkage(c, "a", "b"), 1.0);
  EXPECT_DOUBLE_EQ(*oracle::Linkage(docs, frags, "a", "b"), 1.0);
  EXPECT_EQ(*JointProb(c, "a", "c"), 0.0);
  EXPECT_FALSE(Linkage(c, "a", "c")->has_value());
  EXPECT_FALSE(MarginalProb(c, "zz").ok());
  EXPECT_FALSE(JointProb(c, "a", "zz").ok());
}

TEST(ProbabilityTest, FillingFragmentHasMarginalOne) {
  FragmentCounts c = CountOrDie({{"a", "a"}, {"a"}, {"a", "x", "a"}}, {"a"});
  EXPECT_DOUBLE_EQ(*MarginalProb(c, "a"), 1.0);
}

TEST(ProbabilityTest, DoublingIsInvariantAndSymmetric) {
  auto docs = RandomDocs(9, 40, 8);
  const std::set<std::string> frags = {"w0", "w1", "w2", "w3", "w4"};
  auto doubled = docs;
  doubled.insert(doubled.end(), docs.begin(), docs.end());
  FragmentCounts c1 = CountOrDie(docs, frags);
  FragmentCounts c2 = CountOrDie(doubled, frags);
  for (const auto& a : frags) {
    EXPECT_EQ(*MarginalProb(c1, a), *MarginalProb(c2, a));
    EXPECT_NEAR(*MarginalProb(c1, a), oracle::Marginal(docs, frags, a), 1e-12);
    for (const auto& b : frags) {
      if (a == b) continue;
      EXPECT_EQ(*JointProb(c1, a, b), *JointProb(c2, a, b));
      EXPECT_EQ(*Linkage(c1, a, b), *Linkage(c2, a, b));
      EXPECT_EQ(*Linkage(c1, a, b), *Linkage(c1, b, a));
      auto expected = oracle::Linkage(docs, frags, a, b);
      auto got = *Linkage(c1, a, b);
      ASSERT_EQ(expected.has_value(), got.has_value());
      if (got) EXPECT_NEAR(*got, *expected, 1e-12);
    }
  }
}

TEST(ProbabilityTest, IndependentPlacementNearZero) {
  Rng rng(21);
  std::vector<std::vector<std::string>> docs;
  for (int d = 0; d < 20000; ++d) {
    docs.push_back({rng.Bernoulli(0.5) ? "a" : "x", rng.Bernoulli(0.5) ? "b" : "y"});
  }
  FragmentCounts c = CountOrDie(docs, {"a", "b", "x", "y"});
  EXPECT_NEAR(**Linkage(c, "a", "b"), 0.0, 0.03);
}

TEST(NetworkTest, HandCorpus) {
  FragmentCounts c = CountOrDie({{"a", "b"}, {"c", "c"}}, {"a", "b", "c"});
  auto net = BuildNetwork(c, 1);
  ASSERT_TRUE(net.ok());
  ASSERT_EQ(net->nodes.size(), 3u);
  ASSERT_EQ(net->edges.size(), 1u);
  EXPECT_EQ(net->nodes[net->edges[0].u].text, "a");
  EXPECT_EQ(net->nodes[net->edges[0].v].text, "b");
  EXPECT_DOUBLE_EQ(net->edges[0].weight, 1.0);
  EXPECT_FALSE(BuildNetwork(c, 2).ok());
}

TEST(NetworkTest, MatchesPairwiseOracle) {
  auto docs = RandomDocs(33, 60, 10);
  const std::set<std::string> frags = {"w0", "w1", "w2", "w3", "w4", "w5"};
  FragmentCounts c = CountOrDie(docs, frags);
  auto net = BuildNetwork(c, 3);
  ASSERT_TRUE(net.ok());
  auto expected = oracle::Network(docs, frags, 3);
  ASSERT_EQ(net->edges.size(), expected.size());
  for (const LinkageEdge& e : net->edges) {
    auto it = expected.find({net->nodes[e.u].text, net->nodes[e.v].text});
    ASSERT_NE(it, expected.end());
    EXPECT_NEAR(e.weight, it->second, 1e-12);
  }
}

TEST(NetworkTest, TsvRoundTrip) {
  auto docs = RandomDocs(34, 60, 10);
  FragmentCounts c = CountOrDie(docs, {"w0", "w1", "w2", "w3", "w9"});
  auto net = BuildNetwork(c, 1);
  ASSERT_TRUE(net.ok());
  auto back = ParseNetworkTsv(NetworkToTsv(*net), NetworkNodesToText(*net));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->edges, net->edges);
  EXPECT_EQ(back->nodes, net->nodes);
}

TEST(ClusterLinkageTest, MatchesOracleOnFourDocs) {
  const std::vector<std::vector<std::string>> docs = {
      {"a", "b", "j"}, {"a", "c", "j", "j"}, {"c", "d"}, {"b", "d", "j"}};
  const std::set<std::string> frags = {"a", "b", "c", "d", "j"};
  FragmentCounts c = CountOrDie(docs, frags);
  const std::map<std::string, int> cluster = {
      {"a", 0}, {"b", 0}, {"c", 1}, {"d", 1}};
  std::vector<int> cluster_of(c.num_fragments(), -1);
  for (const auto& [t, k] : cluster) cluster_of[*c.Find(t)] = k;
  auto got = ClusterLinkage(c, cluster_of, 2, *c.Find("j"));
  ASSERT_TRUE(got.ok()) << got.status();
  auto expected = oracle::ClusterLinkage(docs, frags, cluster, 2, "j");
  double sum = 0;
  for (int k = 0; k < 2; ++k) {
    ASSERT_TRUE(got->bits[k].has_value());
    EXPECT_NEAR(*got->bits[k], *expected[k], 1e-12);
    sum += got->conditional[k];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(ClusterLinkageTest, ExclusiveCandidate) {
  const std::vector<std::vector<std::string>> docs = {
      {"a", "j"}, {"a", "b", "j"}, {"c", "d"}, {"c"}};
  FragmentCounts c = CountOrDie(docs, {"a", "b", "c", "d", "j"});
  std::vector<int> cluster_of(c.num_fragments(), -1);
  cluster_of[*c.Find("a")] = 0;
  cluster_of[*c.Find("b")] = 0;
  cluster_of[*c.Find("c")] = 1;
  cluster_of[*c.Find("d")] = 1;
  auto got = ClusterLinkage(c, cluster_of, 2, *c.Find("j"));
  ASSERT_TRUE(got.ok());
  EXPECT_DOUBLE_EQ(got->conditional[0], 1.0);
  EXPECT_NEAR(*got->bits[0], -std::log2(got->prior[0]), 1e-12);
  EXPECT_GT(*got->bits[0], 0.0);
  EXPECT_FALSE(got->bits[1].has_value());
  EXPECT_EQ(got->BestCluster(), 0);
}

TEST(ClusterLinkageTest, PriorMatchingConditionalNearZero) {
  // j adds its own mass to every document it is in, so the prior can only
  // match the conditional in the limit of a rare candidate.
  std::vector<std::vector<std::string>> docs(20000, {"a", "c"});
  docs.push_back({"b", "d", "j"});
  FragmentCounts c = CountOrDie(docs, {"a", "b", "c", "d", "j"});
  std::vector<int> cluster_of(c.num_fragments(), -1);
  cluster_of[*c.Find("a")] = 0;
  cluster_of[*c.Find("b")] = 0;
  cluster_of[*c.Find("c")] = 1;
  cluster_of[*c.Find("d")] = 1;
  auto got = ClusterLinkage(c, cluster_of, 2, *c.Find("j"));
  ASSERT_TRUE(got.ok());
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(*got->bits[k], 0.0, 1e-4);
  EXPECT_EQ(got->BestCluster(), 0);
}

TEST(ClusterLinkageTest, UnclusteredNeighboursOnly) {
  FragmentCounts c = CountOrDie({{"j", "x"}, {"a"}}, {"a", "j", "x"});
  std::vector<int> cluster_of(c.num_fragments(), -1);
  cluster_of[*c.Find("a")] = 0;
  auto got = ClusterLinkage(c, cluster_of, 1, *c.Find("j"));
  ASSERT_TRUE(got.ok());
  EXPECT_FALSE(got->bits[0].has_value());
  EXPECT_FALSE(got->BestCluster().has_value());
}

}  // namespace
}  // namespace argpat
