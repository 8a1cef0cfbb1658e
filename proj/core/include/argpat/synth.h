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

#ifndef ARGPAT_SYNTH_H_
#define ARGPAT_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "argpat/corpus.h"

namespace argpat {

// Parameters of a planted threaded corpus. Every reply is written around a
// primary pattern drawn from its author's preferences; its body mixes
// fragments of that pattern, occasional fragments of other patterns, words
// of the thread's topic and function words.
struct SynthOptions {
  uint64_t seed = 1;
  int n_threads = 20;
  int replies_per_thread = 9;
  int n_authors = 12;

  int n_patterns = 6;
  int unigrams_per_pattern = 5;
  int bigrams_per_pattern = 1;
  int min_fragments = 3;  // Per reply.
  int max_fragments = 6;
  double cross_rate = 0.08;  // Chance a fragment comes from another pattern.

  int n_topics = 2;
  int words_per_topic = 25;
  bool meta_topic = false;
  double meta_share = 0.15;  // Share of threads on the meta topic.
  int min_topic_words = 6;
  int max_topic_words = 12;

  // Per-pattern reply outcomes; empty means 0.05 and 2.0 for every pattern.
  std::vector<double> delta_rate;
  std::vector<double> score_mean;
  double score_noise = 2.0;

  // Author preference = softmax(spread * standard normal draws).
  double preference_spread = 1.5;

  int candidates_per_pattern = 2;
  double candidate_rate = 0.5;  // Chance a reply carries a candidate word.
  int noise_candidates = 2;
};

struct SynthCorpus {
  Corpus corpus;
  std::string seeds_text;  // Seed lexicon file contents.
  // Planted fragment texts per pattern ("word" or "word partner").
  std::vector<std::vector<std::string>> groups;
  std::vector<std::vector<std::string>> candidates;  // Per pattern.
  std::vector<std::string> noise_candidates;
  std::vector<std::string> markers;  // Meta-topic marker words.
  std::vector<std::vector<std::string>> topic_words;  // Last is meta if any.
  std::vector<int> doc_pattern;  // Primary pattern, -1 for posts.
  std::vector<int> doc_topic;    // Planted thread topic.
  std::vector<std::vector<double>> author_preference;

  // Canonical JSONL, one document per line.
  std::string ToJsonl() const;
  std::string CandidatesText() const;
  std::string MarkersText() const;
};

// Deterministic pseudo-word for index i ("kavo", "tesimu", ...).
std::string SynthWord(uint32_t i);

SynthCorpus GenerateCorpus(const SynthOptions& options);

}  // namespace argpat

#endif  // ARGPAT_SYNTH_H_
