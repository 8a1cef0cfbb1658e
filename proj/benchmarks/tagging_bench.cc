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

#include "argpat/synth.h"
#include "argpat/tagging.h"

namespace argpat {
namespace {

PatternLexicon FromGroups(const SynthCorpus& synth) {
  PatternLexicon lex;
  lex.n_clusters = static_cast<int>(synth.groups.size());
  for (size_t k = 0; k < synth.groups.size(); ++k) {
    for (const auto& text : synth.groups[k]) {
      lex.entries.push_back({*Fragment::Parse(text), static_cast<int>(k),
                             Provenance::kSeed});
    }
  }
  std::sort(lex.entries.begin(), lex.entries.end(),
            [](const LexiconEntry& a, const LexiconEntry& b) {
              return a.fragment < b.fragment;
            });
  return lex;
}

void BM_TagCorpus(benchmark::State& state) {
  SynthOptions o;
  o.n_threads = 500;
  o.replies_per_thread = 9;
  const SynthCorpus synth = GenerateCorpus(o);
  const PatternIndex index(FromGroups(synth));
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(TagCorpus(synth.corpus, index, workers));
  }
  state.SetItemsProcessed(state.iterations() * synth.corpus.size());
}
BENCHMARK(BM_TagCorpus)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace argpat

BENCHMARK_MAIN();
