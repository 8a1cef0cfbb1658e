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

#ifndef ARGPAT_TOPICS_H_
#define ARGPAT_TOPICS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "argpat/communities.h"
#include "argpat/corpus.h"
#include "argpat/text.h"
#include "argpat/tokenize.h"

namespace argpat {

// Built-in English closed-class lists.
const std::vector<std::string>& DefaultPronouns();
const std::vector<std::string>& DefaultStopwords();

// Word list file: one word per line, '#' starts a comment.
std::vector<std::string> ParseWordList(std::string_view text);

struct TopicVocab {
  std::vector<std::string> words;  // Sorted.
  StringMap<int32_t> index;

  std::optional<int32_t> Find(std::string_view word) const;
  size_t size() const { return words.size(); }
};

// Corpus tokens minus lexicon unigrams, minus both words of every lexicon
// bigram, minus pronouns and stopwords, minus tokens appearing in fewer
// than min_df documents. `docs` are raw (unmerged) token lists.
absl::StatusOr<TopicVocab> BuildTopicVocab(
    std::span<const std::vector<std::string>> docs,
    std::span<const Fragment> lexicon_fragments,
    std::span<const std::string> pronouns,
    std::span<const std::string> stopwords, uint32_t min_df = 5);

struct LdaOptions {
  int n_topics = 25;
  std::optional<double> alpha;  // Defaults to 5 / n_topics.
  double beta = 0.01;
  int iterations = 1000;
  uint64_t seed = 0;
};

// Fitted LDA parameters. Word counts are kept so the model can be stored
// exactly; topic_word is derived from them.
struct TopicModel {
  int n_topics = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int iterations = 0;
  uint64_t seed = 0;
  std::vector<std::string> vocab;
  std::vector<uint32_t> word_counts;   // n_topics x vocab, row-major.
  std::vector<uint64_t> topic_totals;  // Row sums of word_counts.

  size_t vocab_size() const { return vocab.size(); }
  // (n_kw + beta) / (n_k + V beta).
  double TopicWord(int k, size_t w) const;
  std::vector<double> TopicWordRow(int k) const;
  // Words by descending probability, ties by word.
  std::vector<std::string> TopWords(int k, size_t n) const;
  // Top three words joined by '-'.
  std::string Label(int k) const;

  friend bool operator==(const TopicModel&, const TopicModel&) = default;
};

struct DocTopics {
  std::string doc_id;
  std::vector<double> theta;
  int dominant = 0;         // argmax theta, ties to the lowest id.
  bool empty = false;       // No in-vocabulary token; theta is uniform.
};

// Invariant probe called after every sweep.
struct GibbsSweep {
  int iteration = 0;
  uint64_t n_tokens = 0;
  std::span<const uint64_t> topic_totals;
};

struct LdaFit {
  TopicModel model;
  std::vector<DocTopics> docs;  // One per input document, same order.
  std::vector<std::string> warnings;
};

// Collapsed Gibbs sampling. Tokens outside the vocabulary are ignored.
absl::StatusOr<LdaFit> FitLda(std::span<const TokenStream> docs,
                              const TopicVocab& vocab,
                              const LdaOptions& options,
                              const std::function<void(const GibbsSweep&)>&
                                  on_sweep = nullptr);

// Gibbs sampling of one held-out document with topic_word fixed.
DocTopics InferDocTopics(const TopicModel& model, const TokenStream& doc,
                         uint64_t seed, int iterations = 100);

struct MetaTopic {
  int topic = 0;
  double overlap = 0.0;  // |top words ∩ markers| / |markers|.
  bool flagged = false;
};

// Overlap of each topic's top-n words with the marker list. A topic is
// flagged when the overlap reaches `threshold`.
std::vector<MetaTopic> ScoreMetaTopics(const TopicModel& model,
                                       std::span<const std::string> markers,
                                       double threshold = 0.3,
                                       size_t top_n = 30);
std::vector<int> FlagMetaTopics(const TopicModel& model,
                                std::span<const std::string> markers,
                                double threshold = 0.3, size_t top_n = 30);

// Per-document dominant topic: posts use their own entry in `post_topics`,
// replies inherit their thread post's. nullopt when the thread post has
// no topic or no in-vocabulary token.
std::vector<std::optional<int>> ThreadTopics(
    const Corpus& corpus, std::span<const DocTopics> post_topics);

// <base>.json holds parameters, vocabulary and the SHA-256 of <base>.bin,
// which holds the little-endian uint32 word counts.
absl::Status SaveTopicModel(const std::filesystem::path& json_path,
                            const TopicModel& model);
absl::StatusOr<TopicModel> LoadTopicModel(
    const std::filesystem::path& json_path);

// CSV: doc_id,dominant,theta_0..theta_{K-1}. The dominant field is blank
// for documents without in-vocabulary tokens.
std::string DocTopicsToCsv(std::span<const DocTopics> docs, int n_topics);
absl::StatusOr<std::vector<DocTopics>> ParseDocTopicsCsv(std::string_view text);

}  // namespace argpat

#endif  // ARGPAT_TOPICS_H_
