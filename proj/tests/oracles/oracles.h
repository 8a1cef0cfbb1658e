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

// Brute-force reference implementations used by the tests. They work on
// plain token lists and dense matrices and share no code with the library.

#ifndef ARGPAT_TESTS_ORACLES_ORACLES_H_
#define ARGPAT_TESTS_ORACLES_ORACLES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Doc = std::vector<std::string>;

// Documents reduced to fragment tokens, empty ones dropped.
std::vector<Doc> FilterDocs(const std::vector<Doc>& docs,
                            const std::set<std::string>& fragments);

double Marginal(const std::vector<Doc>& docs,
                const std::set<std::string>& fragments, const std::string& a);
double Joint(const std::vector<Doc>& docs,
             const std::set<std::string>& fragments, const std::string& a,
             const std::string& b);
// nullopt when the joint probability is zero.
std::optional<double> Linkage(const std::vector<Doc>& docs,
                              const std::set<std::string>& fragments,
                              const std::string& a, const std::string& b);

// Every positive-linkage pair among fragments in >= min_df documents,
// keyed by (smaller, larger).
std::map<std::pair<std::string, std::string>, double> Network(
    const std::vector<Doc>& docs, const std::set<std::string>& fragments,
    uint32_t min_df);

// Cluster linkage bits per cluster for candidate j, straight from the
// defining sums. nullopt entries have zero conditional mass.
std::vector<std::optional<double>> ClusterLinkage(
    const std::vector<Doc>& docs, const std::set<std::string>& fragments,
    const std::map<std::string, int>& cluster_of, int n_clusters,
    const std::string& j);

struct Edge {
  int u;
  int v;
  double w;
};

// Newman modularity from the dense adjacency matrix.
double Modularity(int n, const std::vector<Edge>& edges,
                  const std::vector<int>& assignment, double gamma = 1.0);

// Maximum modularity over every set partition of n <= 10 nodes.
double BestModularity(int n, const std::vector<Edge>& edges,
                      double gamma = 1.0);

double AdjustedRand(const std::vector<int>& a, const std::vector<int>& b);

// Kolmogorov-Smirnov statistic of samples against Uniform(0, 1), and the
// asymptotic p-value.
double KsStatistic(std::vector<double> samples);
double KsPValue(double d, size_t n);

// Phrase score of the adjacent pair (a, b).
double PhraseScore(const std::vector<Doc>& docs, const std::string& a,
                   const std::string& b, uint64_t min_count);

// Hit counts of already-merged tokens.
std::vector<uint32_t> CountHits(const Doc& tokens,
                                const std::map<std::string, int>& pattern_of,
                                int n_patterns);

// Percent bonus of each pattern within one stratum.
std::map<int, double> Bonuses(const std::vector<int>& pattern,
                              const std::vector<double>& y, bool relative);

}  // namespace oracle

#endif  // ARGPAT_TESTS_ORACLES_ORACLES_H_
