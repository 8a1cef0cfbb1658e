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

#include "argpat/phrases.h"
#include "argpat/synth.h"
#include "argpat/tokenize.h"

namespace argpat {
namespace {

const SynthCorpus& Corpus2k() {
  static const SynthCorpus* corpus = [] {
    SynthOptions o;
    o.n_threads = 200;
    o.replies_per_thread = 9;
    return new SynthCorpus(GenerateCorpus(o));
  }();
  return *corpus;
}

void BM_Tokenize(benchmark::State& state) {
  const auto& docs = Corpus2k().corpus.documents();
  size_t bytes = 0;
  for (const auto& d : docs) bytes += d.body.size();
  for (auto _ : state) {
    for (const auto& d : docs) benchmark::DoNotOptimize(Tokenize(d.body));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_Tokenize);

void BM_DetectBigrams(benchmark::State& state) {
  const SynthCorpus& synth = Corpus2k();
  std::vector<std::vector<std::string>> tokens;
  for (const auto& d : synth.corpus.documents()) tokens.push_back(Tokenize(d.body));
  const SeedLexicon seeds = ParseSeedLexicon(synth.seeds_text)->lexicon;
  PhraseOptions options{.min_count = 5, .threshold = 1.0,
                        .workers = static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(DetectBigrams(tokens, seeds, options));
  }
}
BENCHMARK(BM_DetectBigrams)->Arg(1)->Arg(4);

}  // namespace
}  // namespace argpat

BENCHMARK_MAIN();
