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

#ifndef ARGPAT_TAGGING_H_
#define ARGPAT_TAGGING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "argpat/communities.h"
#include "argpat/corpus.h"
#include "argpat/phrases.h"
#include "argpat/text.h"
#include "argpat/tokenize.h"

namespace argpat {

// Token to pattern lookup built from a lexicon.
class PatternIndex {
 public:
  explicit PatternIndex(const PatternLexicon& lexicon);

  int n_patterns() const { return n_patterns_; }
  const BigramSet& bigrams() const { return bigrams_; }
  // Pattern of a (merged) token, if it is a lexicon fragment.
  std::optional<int> PatternOf(std::string_view token) const;
  // Tokenizes a body and merges lexicon bigrams.
  std::vector<std::string> Prepare(std::string_view body) const;

 private:
  int n_patterns_ = 0;
  StringMap<int> pattern_of_;
  BigramSet bigrams_;
};

struct PatternVector {
  std::string doc_id;
  std::vector<uint32_t> hits;  // Indexed by pattern id.
  uint32_t total_hits = 0;
  std::optional<int> dominant;  // Unique argmax with at least one hit.

  friend bool operator==(const PatternVector&, const PatternVector&) = default;
};

// `tokens` must already be phrase-merged.
PatternVector TagDocument(const TokenStream& tokens, const PatternIndex& index);

// Tags every document of the corpus, in corpus order.
std::vector<PatternVector> TagCorpus(const Corpus& corpus,
                                     const PatternIndex& index,
                                     int workers = 1);

enum class FrequencyMode { kHitShare, kDominantShare };

// Share of each pattern over the visible replies with at least one hit.
// Hit-share divides summed hits by summed total hits; dominant-share counts
// replies by their dominant pattern. `tags` is indexed like the corpus.
absl::StatusOr<std::vector<double>> PatternFrequencies(
    const CorpusView& view, std::span<const PatternVector> tags,
    FrequencyMode mode = FrequencyMode::kHitShare);

// CSV: doc_id,hits_1..hits_P,dominant. Patterns are numbered from 1 in
// the file; an empty dominant field means none.
std::string TagsToCsv(std::span<const PatternVector> tags, int n_patterns);
absl::StatusOr<std::vector<PatternVector>> ParseTagsCsv(std::string_view text);

}  // namespace argpat

#endif  // ARGPAT_TAGGING_H_
