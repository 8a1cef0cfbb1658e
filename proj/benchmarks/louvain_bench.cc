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

#include <benchmark/benchmark.h>

#include "argpat/communities.h"
#include "argpat/rng.h"
#include "argpat/text.h"

namespace argpat {
namespace {

// Six planted blocks, about 12 neighbours per node.
LinkageNetwork Planted(int n, uint64_t seed) {
  LinkageNetwork net;
  for (int i = 0; i < n; ++i) {
    net.nodes.push_back(Fragment::FromToken(fmt::format("f{:06d}", i)));
  }
  Rng rng(seed);
  const double p_in = 10.0 / (n / 6.0);
  const double p_out = 2.0 / n;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const bool same = u % 6 == v % 6;
      if (rng.Bernoulli(same ? p_in : p_out)) {
        net.edges.push_back({u, v, (same ? 1.0 : 0.3) + rng.Uniform()});
      }
    }
  }
  return net;
}

void BM_Louvain(benchmark::State& state) {
  const LinkageNetwork net = Planted(static_cast<int>(state.range(0)), 1);
  const int restarts = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Louvain(net, 7, 1.0, restarts));
  }
  state.counters["edges"] = static_cast<double>(net.edges.size());
}
BENCHMARK(BM_Louvain)
    ->Args({200, 1})
    ->Args({200, 64})
    ->Args({1500, 1})
    ->Args({1500, 64})
    ->Unit(benchmark::kMillisecond);

void BM_Modularity(benchmark::State& state) {
  const LinkageNetwork net = Planted(1500, 2);
  std::vector<int> assignment(net.nodes.size());
  for (size_t i = 0; i < assignment.size(); ++i) assignment[i] = i % 6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Modularity(net, assignment));
  }
}
BENCHMARK(BM_Modularity);

}  // namespace
}  // namespace argpat

BENCHMARK_MAIN();
