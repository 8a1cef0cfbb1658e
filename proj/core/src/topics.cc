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

#include "argpat/topics.h"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "argpat/hash.h"
#include "argpat/rng.h"
#include "json.hpp"

namespace argpat {
namespace {

int Argmax(std::span<const double> v) {
  int best = 0;
  for (size_t k = 1; k < v.size(); ++k) {
    if (v[k] > v[static_cast<size_t>(best)]) best = static_cast<int>(k);
  }
  return best;
}

void Normalize(std::vector<double>* v) {
  double total = 0.0;
  for (double x : *v) total += x;
  for (double& x : *v) x /= total;
}

DocTopics UniformTopics(std::string doc_id, int k) {
  DocTopics out;
  out.doc_id = std::move(doc_id);
  out.theta.assign(static_cast<size_t>(k), 1.0 / k);
  out.dominant = 0;
  out.empty = true;
  return out;
}

size_t SampleIndex(Rng& rng, std::span<const double> cumulative) {
  const double u = rng.Uniform() * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<size_t>(it - cumulative.begin());
}

}  // namespace

const std::vector<std::string>& DefaultPronouns() {
  static const std::vector<std::string> kWords = {
      "i",        "me",         "my",       "mine",     "myself",
      "we",       "us",         "our",      "ours",     "ourselves",
      "you",      "your",       "yours",    "yourself", "yourselves",
      "he",       "him",        "his",      "himself",  "she",
      "her",      "hers",       "herself",  "it",       "its",
      "itself",   "they",       "them",     "their",    "theirs",
      "themselves", "one",      "oneself",  "someone",  "somebody",
      "something", "anyone",    "anybody",  "anything", "everyone",
      "everybody", "everything", "nobody",  "nothing",  "noone",
      "who",      "whom",       "whose",    "which",    "what",
      "whoever",  "whatever",   "i'm",      "i've",     "i'd",
      "i'll",     "you're",     "you've",   "you'd",    "you'll",
      "he's",     "she's",      "it's",     "we're",    "we've",
      "they're",  "they've",    "thee",     "thou",     "thy",
      "u",        "ur",         "y'all",    "yall",
  };
  return kWords;
}

const std::vector<std::string>& DefaultStopwords() {
  static const std::vector<std::string> kWords = {
      "a",       "about",   "above",   "after",   "again",   "against",
      "all",     "also",    "am",      "an",      "and",     "any",
      "are",     "aren't",  "as",      "at",      "be",      "because",
      "been",    "before",  "being",   "below",   "between", "both",
      "but",     "by",      "can",     "can't",   "cannot",  "could",
      "couldn't", "did",    "didn't",  "do",      "does",    "doesn't",
      "doing",   "don't",   "down",    "during",  "each",    "even",
      "few",     "for",     "from",    "further", "get",     "got",
      "had",     "hadn't",  "has",     "hasn't",  "have",    "haven't",
      "having",  "here",    "how",     "if",      "in",      "into",
      "is",      "isn't",   "just",    "let's",   "like",    "more",
      "most",    "much",    "must",    "no",      "nor",     "not",
      "now",     "of",      "off",     "on",      "once",    "only",
      "or",      "other",   "ought",   "out",     "over",    "own",
      "same",    "shall",   "should",  "shouldn't", "so",    "some",
      "such",    "than",    "that",    "that's",  "the",     "then",
      "there",   "there's", "these",   "this",    "those",   "through",
      "to",      "too",     "under",   "until",   "up",      "very",
      "was",     "wasn't",  "were",    "weren't", "when",    "where",
      "while",   "why",     "will",    "with",    "won't",   "would",
      "wouldn't", "yes",    "yet",
  };
  return kWords;
}

std::vector<std::string> ParseWordList(std::string_view text) {
  std::vector<std::string> out;
  for (std::string_view line : Split(text, '\n')) {
    line = Trim(line.substr(0, line.find('#')));
    if (!line.empty()) out.push_back(ToLowerAscii(line));
  }
  return out;
}

std::optional<int32_t> TopicVocab::Find(std::string_view word) const {
  auto it = index.find(word);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

absl::StatusOr<TopicVocab> BuildTopicVocab(
    std::span<const std::vector<std::string>> docs,
    std::span<const Fragment> lexicon_fragments,
    std::span<const std::string> pronouns,
    std::span<const std::string> stopwords, uint32_t min_df) {
  StringSet removed;
  for (const Fragment& f : lexicon_fragments) {
    for (std::string_view part : Split(f.text, ' ', true)) {
      removed.emplace(part);
    }
  }
  removed.insert(pronouns.begin(), pronouns.end());
  removed.insert(stopwords.begin(), stopwords.end());

  StringMap<uint32_t> df;
  for (const auto& tokens : docs) {
    std::unordered_set<std::string_view> seen;
    for (const std::string& t : tokens) {
      if (removed.contains(t) || !seen.insert(t).second) continue;
      ++df[t];
    }
  }
  TopicVocab vocab;
  for (const auto& [word, n] : df) {
    if (n >= min_df) vocab.words.push_back(word);
  }
  if (vocab.words.empty()) {
    return absl::FailedPreconditionError(
        "topic vocabulary is empty after removing lexicon words, pronouns, "
        "stopwords and rare tokens");
  }
  std::sort(vocab.words.begin(), vocab.words.end());
  for (size_t i = 0; i < vocab.words.size(); ++i) {
    vocab.index.emplace(vocab.words[i], static_cast<int32_t>(i));
  }
  return vocab;
}

double TopicModel::TopicWord(int k, size_t w) const {
  const double v = static_cast<double>(vocab.size());
  return (word_counts[static_cast<size_t>(k) * vocab.size() + w] + beta) /
         (static_cast<double>(topic_totals[static_cast<size_t>(k)]) + v * beta);
}

std::vector<double> TopicModel::TopicWordRow(int k) const {
  std::vector<double> row(vocab.size());
  for (size_t w = 0; w < vocab.size(); ++w) row[w] = TopicWord(k, w);
  return row;
}

std::vector<std::string> TopicModel::TopWords(int k, size_t n) const {
  std::vector<size_t> order(vocab.size());
  for (size_t w = 0; w < order.size(); ++w) order[w] = w;
  const uint32_t* row = word_counts.data() + static_cast<size_t>(k) * vocab.size();
  n = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<ptrdiff_t>(n),
                    order.end(), [&](size_t a, size_t b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return vocab[a] < vocab[b];
                    });
  std::vector<std::string> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(vocab[order[i]]);
  return out;
}

std::string TopicModel::Label(int k) const {
  std::string label;
  for (const std::string& w : TopWords(k, 3)) {
    if (!label.empty()) label += '-';
    label += w;
  }
  return label;
}

absl::StatusOr<LdaFit> FitLda(
    std::span<const TokenStream> docs, const TopicVocab& vocab,
    const LdaOptions& options,
    const std::function<void(const GibbsSweep&)>& on_sweep) {
  if (options.n_topics < 1) {
    return absl::InvalidArgumentError("n_topics must be at least 1");
  }
  if (options.iterations < 1) {
    return absl::InvalidArgumentError("iterations must be at least 1");
  }
  if (!(options.beta > 0.0)) {
    return absl::InvalidArgumentError("beta must be positive");
  }
  const int k_topics = options.n_topics;
  const size_t kk = static_cast<size_t>(k_topics);
  const double alpha = options.alpha.value_or(5.0 / k_topics);
  if (!(alpha > 0.0)) {
    return absl::InvalidArgumentError("alpha must be positive");
  }
  if (docs.empty()) return absl::FailedPreconditionError("corpus is empty");

  LdaFit fit;
  if (kk > docs.size()) {
    fit.warnings.push_back(StrCat("n_topics (", k_topics,
                                  ") exceeds the number of documents (",
                                  docs.size(), ")"));
  }
  const size_t v = vocab.size();

  std::vector<std::vector<int32_t>> words(docs.size());
  uint64_t n_tokens = 0;
  for (size_t d = 0; d < docs.size(); ++d) {
    for (const std::string& t : docs[d].tokens) {
      if (auto w = vocab.Find(t)) words[d].push_back(*w);
    }
    n_tokens += words[d].size();
  }
  if (n_tokens == 0) {
    return absl::FailedPreconditionError(
        "no document contains an in-vocabulary token");
  }

  Rng rng(options.seed);
  std::vector<uint32_t> nkw(kk * v, 0);
  std::vector<uint64_t> nk(kk, 0);
  std::vector<std::vector<uint32_t>> ndk(docs.size(),
                                         std::vector<uint32_t>(kk, 0));
  std::vector<std::vector<int32_t>> z(docs.size());
  for (size_t d = 0; d < docs.size(); ++d) {
    z[d].resize(words[d].size());
    for (size_t i = 0; i < words[d].size(); ++i) {
      const size_t k = static_cast<size_t>(rng.UniformInt(kk));
      z[d][i] = static_cast<int32_t>(k);
      ++nkw[k * v + static_cast<size_t>(words[d][i])];
      ++nk[k];
      ++ndk[d][k];
    }
  }

  const double vbeta = static_cast<double>(v) * options.beta;
  std::vector<double> cumulative(kk);
  for (int iter = 0; iter < options.iterations; ++iter) {
    for (size_t d = 0; d < docs.size(); ++d) {
      for (size_t i = 0; i < words[d].size(); ++i) {
        const size_t w = static_cast<size_t>(words[d][i]);
        size_t k = static_cast<size_t>(z[d][i]);
        --nkw[k * v + w];
        --nk[k];
        --ndk[d][k];
        double total = 0.0;
        for (size_t t = 0; t < kk; ++t) {
          total += (ndk[d][t] + alpha) * (nkw[t * v + w] + options.beta) /
                   (static_cast<double>(nk[t]) + vbeta);
          cumulative[t] = total;
        }
        k = SampleIndex(rng, cumulative);
        z[d][i] = static_cast<int32_t>(k);
        ++nkw[k * v + w];
        ++nk[k];
        ++ndk[d][k];
      }
    }
    if (on_sweep) on_sweep({iter + 1, n_tokens, nk});
  }

  TopicModel& model = fit.model;
  model.n_topics = k_topics;
  model.alpha = alpha;
  model.beta = options.beta;
  model.iterations = options.iterations;
  model.seed = options.seed;
  model.vocab = vocab.words;
  model.word_counts = std::move(nkw);
  model.topic_totals = std::move(nk);

  fit.docs.reserve(docs.size());
  for (size_t d = 0; d < docs.size(); ++d) {
    if (words[d].empty()) {
      fit.docs.push_back(UniformTopics(docs[d].doc_id, k_topics));
      continue;
    }
    DocTopics out;
    out.doc_id = docs[d].doc_id;
    out.theta.resize(kk);
    for (size_t k = 0; k < kk; ++k) out.theta[k] = ndk[d][k] + alpha;
    Normalize(&out.theta);
    out.dominant = Argmax(out.theta);
    fit.docs.push_back(std::move(out));
  }
  return fit;
}

DocTopics InferDocTopics(const TopicModel& model, const TokenStream& doc,
                         uint64_t seed, int iterations) {
  const size_t kk = static_cast<size_t>(model.n_topics);
  const size_t v = model.vocab.size();
  std::vector<int32_t> words;
  for (const std::string& t : doc.tokens) {
    auto it = std::lower_bound(model.vocab.begin(), model.vocab.end(), t);
    if (it != model.vocab.end() && *it == t) {
      words.push_back(static_cast<int32_t>(it - model.vocab.begin()));
    }
  }
  if (words.empty()) return UniformTopics(doc.doc_id, model.n_topics);

  std::vector<double> phi(kk * v);
  for (size_t k = 0; k < kk; ++k) {
    for (size_t w = 0; w < v; ++w) {
      phi[k * v + w] = model.TopicWord(static_cast<int>(k), w);
    }
  }
  Rng rng(seed);
  std::vector<uint32_t> ndk(kk, 0);
  std::vector<size_t> z(words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    z[i] = static_cast<size_t>(rng.UniformInt(kk));
    ++ndk[z[i]];
  }
  std::vector<double> cumulative(kk);
  for (int iter = 0; iter < std::max(iterations, 1); ++iter) {
    for (size_t i = 0; i < words.size(); ++i) {
      const size_t w = static_cast<size_t>(words[i]);
      --ndk[z[i]];
      double total = 0.0;
      for (size_t k = 0; k < kk; ++k) {
        total += (ndk[k] + model.alpha) * phi[k * v + w];
        cumulative[k] = total;
      }
      z[i] = SampleIndex(rng, cumulative);
      ++ndk[z[i]];
    }
  }
  DocTopics out;
  out.doc_id = doc.doc_id;
  out.theta.resize(kk);
  for (size_t k = 0; k < kk; ++k) out.theta[k] = ndk[k] + model.alpha;
  Normalize(&out.theta);
  out.dominant = Argmax(out.theta);
  return out;
}

std::vector<MetaTopic> ScoreMetaTopics(const TopicModel& model,
                                       std::span<const std::string> markers,
                                       double threshold, size_t top_n) {
  std::set<std::string> marker_set;
  for (const std::string& m : markers) marker_set.insert(ToLowerAscii(m));
  std::vector<MetaTopic> out;
  for (int k = 0; k < model.n_topics; ++k) {
    MetaTopic meta;
    meta.topic = k;
    if (!marker_set.empty()) {
      size_t hits = 0;
      for (const std::string& w : model.TopWords(k, top_n)) {
        hits += marker_set.count(w);
      }
      meta.overlap =
          static_cast<double>(hits) / static_cast<double>(marker_set.size());
      meta.flagged = meta.overlap >= threshold;
    }
    out.push_back(meta);
  }
  return out;
}

std::vector<int> FlagMetaTopics(const TopicModel& model,
                                std::span<const std::string> markers,
                                double threshold, size_t top_n) {
  std::vector<int> out;
  for (const MetaTopic& m : ScoreMetaTopics(model, markers, threshold, top_n)) {
    if (m.flagged) out.push_back(m.topic);
  }
  return out;
}

std::vector<std::optional<int>> ThreadTopics(
    const Corpus& corpus, std::span<const DocTopics> post_topics) {
  StringMap<int> by_id;
  for (const DocTopics& t : post_topics) {
    if (!t.empty) by_id.emplace(t.doc_id, t.dominant);
  }
  std::vector<std::optional<int>> out(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    auto post = corpus.ThreadPost(i);
    if (!post) continue;
    auto it = by_id.find(corpus[*post].id);
    if (it != by_id.end()) out[i] = it->second;
  }
  return out;
}

absl::Status SaveTopicModel(const std::filesystem::path& json_path,
                            const TopicModel& model) {
  std::string blob;
  blob.reserve(model.word_counts.size() * 4);
  for (uint32_t c : model.word_counts) {
    for (int b = 0; b < 4; ++b) blob.push_back(static_cast<char>((c >> (8 * b)) & 0xff));
  }
  std::filesystem::path bin_path = json_path;
  bin_path.replace_extension(".bin");

  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["n_topics"] = model.n_topics;
  j["alpha"] = FormatDouble(model.alpha);
  j["beta"] = FormatDouble(model.beta);
  j["iterations"] = model.iterations;
  j["seed"] = std::to_string(model.seed);
  j["counts_file"] = bin_path.filename().string();
  j["counts_sha256"] = Sha256Hex(blob);
  j["vocab"] = model.vocab;
  if (auto s = WriteFile(bin_path, blob); !s.ok()) return s;
  return WriteFile(json_path, j.dump(1) + "\n");
}

absl::StatusOr<TopicModel> LoadTopicModel(
    const std::filesystem::path& json_path) {
  auto text = ReadFile(json_path);
  if (!text.ok()) return text.status();
  nlohmann::json j = nlohmann::json::parse(*text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::DataLossError(StrCat(json_path.string(), ": malformed JSON"));
  }
  TopicModel model;
  try {
    model.n_topics = j.at("n_topics").get<int>();
    auto alpha = ParseDouble(j.at("alpha").get<std::string>());
    auto beta = ParseDouble(j.at("beta").get<std::string>());
    auto seed = ParseInt<uint64_t>(j.at("seed").get<std::string>());
    if (!alpha || !beta || !seed) {
      return absl::DataLossError("bad topic model parameters");
    }
    model.alpha = *alpha;
    model.beta = *beta;
    model.seed = *seed;
    model.iterations = j.at("iterations").get<int>();
    model.vocab = j.at("vocab").get<std::vector<std::string>>();
    const auto bin_path =
        json_path.parent_path() / j.at("counts_file").get<std::string>();
    auto blob = ReadFile(bin_path);
    if (!blob.ok()) return blob.status();
    if (Sha256Hex(*blob) != j.at("counts_sha256").get<std::string>()) {
      return absl::DataLossError(
          StrCat(bin_path.string(), ": content hash mismatch"));
    }
    const size_t n = static_cast<size_t>(model.n_topics) * model.vocab.size();
    if (blob->size() != n * 4) {
      return absl::DataLossError(StrCat(bin_path.string(), ": wrong size"));
    }
    model.word_counts.resize(n);
    model.topic_totals.assign(static_cast<size_t>(model.n_topics), 0);
    for (size_t i = 0; i < n; ++i) {
      uint32_t c = 0;
      for (int b = 0; b < 4; ++b) {
        c |= static_cast<uint32_t>(static_cast<unsigned char>((*blob)[i * 4 + b]))
             << (8 * b);
      }
      model.word_counts[i] = c;
      model.topic_totals[i / model.vocab.size()] += c;
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::DataLossError(StrCat(json_path.string(), ": ", e.what()));
  }
  return model;
}

std::string DocTopicsToCsv(std::span<const DocTopics> docs, int n_topics) {
  std::string out = "doc_id,dominant";
  for (int k = 0; k < n_topics; ++k) StrAppend(&out, ",theta_", k);
  out += '\n';
  for (const DocTopics& d : docs) {
    out += CsvEscape(d.doc_id);
    out += ',';
    if (!d.empty) StrAppend(&out, d.dominant);
    for (double t : d.theta) StrAppend(&out, ",", FormatDouble(t));
    out += '\n';
  }
  return out;
}

absl::StatusOr<std::vector<DocTopics>> ParseDocTopicsCsv(
    std::string_view text) {
  std::vector<DocTopics> out;
  bool header = true;
  for (std::string_view line : Split(text, '\n', true)) {
    if (header) {
      header = false;
      continue;
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto parsed = SplitCsvLine(line);
    if (!parsed || parsed->size() < 3) {
      return absl::DataLossError(StrCat("bad doc-topics line: ", line));
    }
    const std::vector<std::string>& fields = *parsed;
    DocTopics d;
    d.doc_id = fields[0];
    if (fields[1].empty()) {
      d.empty = true;
    } else {
      auto dominant = ParseInt<int>(fields[1]);
      if (!dominant) return absl::DataLossError(StrCat("bad dominant: ", line));
      d.dominant = *dominant;
    }
    for (size_t i = 2; i < fields.size(); ++i) {
      auto t = ParseDouble(fields[i]);
      if (!t) return absl::DataLossError(StrCat("bad theta: ", line));
      d.theta.push_back(*t);
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace argpat
