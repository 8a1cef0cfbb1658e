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

#include "argpat/analytics.h"
#include "argpat/rng.h"

namespace argpat {
namespace {

EfficacySample Sample(size_t n) {
  Rng rng(9);
  EfficacySample s;
  s.n_patterns = 6;
  for (size_t i = 0; i < n; ++i) {
    s.Add(static_cast<int>(rng.UniformInt(6)), static_cast<int>(rng.UniformInt(25)),
          rng.Bernoulli(0.0135) ? 1.0 : 0.0);
  }
  return s;
}

void BM_Significance(benchmark::State& state) {
  const EfficacySample s = Sample(static_cast<size_t>(state.range(0)));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto rows = ComputeEfficacy(s, Outcome::kDelta);
    benchmark::DoNotOptimize(
        Significance(s, Outcome::kDelta, 1000, 1, rows, workers));
  }
}
BENCHMARK(BM_Significance)
    ->Args({20000, 1})
    ->Args({20000, 4})
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace argpat

BENCHMARK_MAIN();
