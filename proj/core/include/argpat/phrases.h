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

#ifndef ARGPAT_PHRASES_H_
#define ARGPAT_PHRASES_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "argpat/text.h"

namespace argpat {

struct SeedCategory {
  std::string name;
  std::vector<std::string> words;
};

// Word lists grouped by category, in file order.
struct SeedLexicon {
  std::vector<SeedCategory> categories;

  // Sorted, de-duplicated union of all categories.
  std::vector<std::string> Words() const;
};

struct SeedLexiconParse {
  SeedLexicon lexicon;
  std::vector<std::string> warnings;
};

// Format: a "#name" line opens a category, followed by one word per line.
// Words are lowercased. Errors: empty input, a word outside any category, a
// word containing whitespace, or a word repeated within one category.
absl::StatusOr<SeedLexiconParse> ParseSeedLexicon(std::string_view text);
absl::StatusOr<SeedLexiconParse> LoadSeedLexicon(
    const std::filesystem::path& path);

enum class Arity { kUnigram, kBigram };

std::string_view ArityName(Arity arity);

// A unigram ("true") or bigram ("necessarily true"). Inside token streams a
// bigram is carried as one merged token joined by '_' ("necessarily_true").
struct Fragment {
  std::string text;
  Arity arity = Arity::kUnigram;

  // Accepts "a" or "a b" (exactly one space, lowercase, no '_').
  static absl::StatusOr<Fragment> Parse(std::string_view text);
  static Fragment FromToken(std::string_view token);

  std::string Token() const;

  friend bool operator==(const Fragment& a, const Fragment& b) {
    return a.text == b.text;
  }
  friend std::strong_ordering operator<=>(const Fragment& a,
                                          const Fragment& b) {
    return a.text <=> b.text;
  }
};

struct PhraseScore {
  uint64_t pair_count = 0;
  double score = 0.0;
};

// Scores of every adjacent pair that contains a seed word.
struct PhraseScoreTable {
  uint64_t total_tokens = 0;
  std::vector<std::pair<std::pair<std::string, std::string>, PhraseScore>>
      entries;  // Sorted by (token_a, token_b).
};

struct PhraseOptions {
  uint64_t min_count = 25;
  double threshold = 10.0;
  int workers = 1;
};

// score = (pair_count - min_count) * total_tokens / (count(a) * count(b)).
// Counting is split across workers and merged before any score is taken, so
// the table does not depend on the worker count.
PhraseScoreTable ScorePhrases(std::span<const std::vector<std::string>> docs,
                              const SeedLexicon& seeds,
                              const PhraseOptions& options);

struct ScoredBigram {
  Fragment fragment;
  uint64_t pair_count = 0;
  double score = 0.0;
};

// Bigrams with a seed member, pair_count >= min_count and score > threshold,
// ordered by descending score (ties by text).
std::vector<ScoredBigram> DetectBigrams(
    std::span<const std::vector<std::string>> docs, const SeedLexicon& seeds,
    const PhraseOptions& options);

// Lookup structure for merging bigram fragments into single tokens.
class BigramSet {
 public:
  BigramSet() = default;
  explicit BigramSet(std::span<const Fragment> fragments);

  bool Contains(std::string_view first, std::string_view second) const;
  size_t size() const { return size_; }

 private:
  StringMap<StringSet> next_;
  size_t size_ = 0;
};

// Greedy left-to-right merge: a matched pair becomes "a_b" and scanning
// resumes after it.
std::vector<std::string> MergePhrases(std::span<const std::string> tokens,
                                      const BigramSet& bigrams);

struct InventoryEntry {
  Fragment fragment;
  uint64_t count = 0;
  std::optional<double> score;  // Bigrams only.
};

// The fragment set fed to the linkage network: seed unigrams plus detected
// bigrams.
struct FragmentInventory {
  std::vector<InventoryEntry> entries;

  std::vector<Fragment> Fragments() const;
};

FragmentInventory BuildInventory(
    std::span<const std::vector<std::string>> docs, const SeedLexicon& seeds,
    std::span<const ScoredBigram> bigrams);

// TSV: text<TAB>arity<TAB>count<TAB>score ("-" for unigrams), with header.
std::string InventoryToTsv(const FragmentInventory& inventory);
absl::StatusOr<FragmentInventory> ParseInventoryTsv(std::string_view text);

// One fragment per line; blank lines ignored.
absl::StatusOr<std::vector<Fragment>> ParseFragmentList(std::string_view text);

}  // namespace argpat

#endif  // ARGPAT_PHRASES_H_
