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

#include "argpat/tagging.h"

#include "argpat/parallel.h"

namespace argpat {

PatternIndex::PatternIndex(const PatternLexicon& lexicon)
    : n_patterns_(lexicon.n_clusters) {
  std::vector<Fragment> fragments;
  for (const LexiconEntry& e : lexicon.entries) {
    pattern_of_.emplace(e.fragment.Token(), e.cluster);
    fragments.push_back(e.fragment);
  }
  bigrams_ = BigramSet(fragments);
}

std::optional<int> PatternIndex::PatternOf(std::string_view token) const {
  auto it = pattern_of_.find(token);
  if (it == pattern_of_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> PatternIndex::Prepare(std::string_view body) const {
  std::vector<std::string> tokens = Tokenize(body);
  if (bigrams_.size() == 0) return tokens;
  return MergePhrases(tokens, bigrams_);
}

PatternVector TagDocument(const TokenStream& tokens,
                          const PatternIndex& index) {
  PatternVector out;
  out.doc_id = tokens.doc_id;
  out.hits.assign(static_cast<size_t>(index.n_patterns()), 0);
  for (const std::string& t : tokens.tokens) {
    if (auto p = index.PatternOf(t)) {
      ++out.hits[static_cast<size_t>(*p)];
      ++out.total_hits;
    }
  }
  if (out.total_hits > 0) {
    int best = 0;
    bool unique = true;
    for (size_t p = 1; p < out.hits.size(); ++p) {
      const uint32_t h = out.hits[p];
      if (h > out.hits[static_cast<size_t>(best)]) {
        best = static_cast<int>(p);
        unique = true;
      } else if (h == out.hits[static_cast<size_t>(best)]) {
        unique = false;
      }
    }
    if (unique) out.dominant = best;
  }
  return out;
}

std::vector<PatternVector> TagCorpus(const Corpus& corpus,
                                     const PatternIndex& index, int workers) {
  std::vector<PatternVector> out(corpus.size());
  ParallelChunks(corpus.size(), workers,
                 [&](size_t, size_t begin, size_t end) {
                   for (size_t i = begin; i < end; ++i) {
                     TokenStream stream{corpus[i].id,
                                        index.Prepare(corpus[i].body)};
                     out[i] = TagDocument(stream, index);
                   }
                 });
  return out;
}

absl::StatusOr<std::vector<double>> PatternFrequencies(
    const CorpusView& view, std::span<const PatternVector> tags,
    FrequencyMode mode) {
  if (tags.size() != view.corpus().size()) {
    return absl::InvalidArgumentError("tags do not match the corpus");
  }
  size_t n_patterns = 0;
  for (const PatternVector& t : tags) n_patterns = std::max(n_patterns, t.hits.size());
  std::vector<uint64_t> numer(n_patterns, 0);
  uint64_t denom = 0;
  for (size_t i : view.Indices()) {
    if (view.corpus()[i].kind != DocKind::kReply) continue;
    const PatternVector& t = tags[i];
    if (t.total_hits == 0) continue;
    if (mode == FrequencyMode::kHitShare) {
      for (size_t p = 0; p < t.hits.size(); ++p) numer[p] += t.hits[p];
      denom += t.total_hits;
    } else if (t.dominant) {
      ++numer[static_cast<size_t>(*t.dominant)];
      ++denom;
    }
  }
  if (denom == 0) {
    return absl::FailedPreconditionError(
        "no visible reply has a pattern hit");
  }
  std::vector<double> out(n_patterns);
  for (size_t p = 0; p < n_patterns; ++p) {
    out[p] = static_cast<double>(numer[p]) / static_cast<double>(denom);
  }
  return out;
}

std::string TagsToCsv(std::span<const PatternVector> tags, int n_patterns) {
  std::string out = "doc_id";
  for (int p = 1; p <= n_patterns; ++p) StrAppend(&out, ",hits_", p);
  out += ",dominant\n";
  for (const PatternVector& t : tags) {
    out += CsvEscape(t.doc_id);
    for (uint32_t h : t.hits) StrAppend(&out, ",", h);
    out += ',';
    if (t.dominant) StrAppend(&out, *t.dominant + 1);
    out += '\n';
  }
  return out;
}

absl::StatusOr<std::vector<PatternVector>> ParseTagsCsv(std::string_view text) {
  std::vector<PatternVector> out;
  bool header = true;
  size_t n_fields = 0;
  for (std::string_view line : Split(text, '\n', true)) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto fields = SplitCsvLine(line);
    if (!fields) return absl::DataLossError(StrCat("bad tags line: ", line));
    if (header) {
      header = false;
      n_fields = fields->size();
      if (n_fields < 2 || fields->front() != "doc_id" ||
          fields->back() != "dominant") {
        return absl::DataLossError("tags file lacks the expected header");
      }
      continue;
    }
    if (fields->size() != n_fields) {
      return absl::DataLossError(StrCat("wrong field count: ", line));
    }
    PatternVector t;
    t.doc_id = (*fields)[0];
    for (size_t i = 1; i + 1 < n_fields; ++i) {
      auto h = ParseInt<uint32_t>((*fields)[i]);
      if (!h) return absl::DataLossError(StrCat("bad hit count: ", line));
      t.hits.push_back(*h);
      t.total_hits += *h;
    }
    if (!fields->back().empty()) {
      auto d = ParseInt<int>(fields->back());
      if (!d || *d < 1 || static_cast<size_t>(*d) > t.hits.size()) {
        return absl::DataLossError(StrCat("bad dominant: ", line));
      }
      t.dominant = *d - 1;
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace argpat
