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

#include "argpat/synth.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "argpat/rng.h"
#include "argpat/text.h"

namespace argpat {
namespace {

constexpr const char* kSyllables[] = {
    "ka", "ve", "ti", "mo", "ru", "sa", "le", "pi", "do", "nu", "ga", "fe",
    "zi", "bo", "tu", "ra", "me", "ki", "lo", "su", "ja", "ne", "vi", "po"};
constexpr uint32_t kNumSyllables = 24;

constexpr const char* kFunctionWords[] = {"the", "a",  "and", "is", "to",
                                          "of",  "it", "i",   "you", "this",
                                          "in",  "that"};

constexpr const char* kMarkerWords[] = {"moderator", "rule",   "delta",
                                        "post",      "removed", "report",
                                        "subreddit", "flair"};

}  // namespace

std::string SynthWord(uint32_t i) {
  std::string w;
  for (int k = 0; k < 3; ++k) {
    w += kSyllables[i % kNumSyllables];
    i /= kNumSyllables;
  }
  return w;
}

std::string SynthCorpus::ToJsonl() const {
  std::string out;
  for (const Document& doc : corpus.documents()) {
    out += DocumentToJson(doc);
    out += '\n';
  }
  return out;
}

std::string SynthCorpus::CandidatesText() const {
  std::string out;
  for (const auto& group : candidates) {
    for (const std::string& c : group) StrAppend(&out, c, "\n");
  }
  for (const std::string& c : noise_candidates) StrAppend(&out, c, "\n");
  return out;
}

std::string SynthCorpus::MarkersText() const {
  std::string out;
  for (const std::string& m : markers) StrAppend(&out, m, "\n");
  return out;
}

SynthCorpus GenerateCorpus(const SynthOptions& options) {
  SynthCorpus out;
  Rng rng(options.seed);
  uint32_t next_word = 0;
  auto fresh = [&] { return SynthWord(next_word++); };

  const size_t np = static_cast<size_t>(options.n_patterns);
  // Fragment units per pattern; a bigram unit is "first partner".
  out.groups.resize(np);
  std::vector<std::string> seed_words;
  for (size_t p = 0; p < np; ++p) {
    std::vector<std::string> unigrams;
    for (int u = 0; u < options.unigrams_per_pattern; ++u) {
      unigrams.push_back(fresh());
      seed_words.push_back(unigrams.back());
    }
    out.groups[p] = unigrams;
    for (int b = 0; b < options.bigrams_per_pattern && !unigrams.empty(); ++b) {
      out.groups[p].push_back(
          StrCat(unigrams[static_cast<size_t>(b) % unigrams.size()], " ",
                 fresh()));
    }
  }
  out.seeds_text = "#tentative\n";
  for (size_t i = 0; i < seed_words.size(); ++i) {
    if (i == seed_words.size() / 2) out.seeds_text += "#certain\n";
    StrAppend(&out.seeds_text, seed_words[i], "\n");
  }

  out.candidates.resize(np);
  for (size_t p = 0; p < np; ++p) {
    for (int c = 0; c < options.candidates_per_pattern; ++c) {
      out.candidates[p].push_back(fresh());
    }
  }
  for (int c = 0; c < options.noise_candidates; ++c) {
    out.noise_candidates.push_back(fresh());
  }

  const int n_semantic = options.n_topics;
  const int n_all_topics = n_semantic + (options.meta_topic ? 1 : 0);
  for (int t = 0; t < n_all_topics; ++t) {
    std::vector<std::string> words;
    if (t == n_semantic) {
      for (const char* m : kMarkerWords) {
        words.emplace_back(m);
        out.markers.emplace_back(m);
      }
    }
    while (static_cast<int>(words.size()) < options.words_per_topic) {
      words.push_back(fresh());
    }
    out.topic_words.push_back(std::move(words));
  }

  std::vector<double> delta_rate = options.delta_rate;
  std::vector<double> score_mean = options.score_mean;
  delta_rate.resize(np, 0.05);
  score_mean.resize(np, 2.0);

  for (int a = 0; a < options.n_authors; ++a) {
    std::vector<double> w(np);
    double total = 0.0;
    for (double& x : w) {
      x = std::exp(options.preference_spread * rng.Normal());
      total += x;
    }
    for (double& x : w) x /= total;
    out.author_preference.push_back(std::move(w));
  }

  auto uniform_int = [&](int lo, int hi) {
    return lo + static_cast<int>(rng.UniformInt(static_cast<uint64_t>(hi - lo + 1)));
  };
  auto pick = [&](const std::vector<std::string>& v) -> const std::string& {
    return v[static_cast<size_t>(rng.UniformInt(v.size()))];
  };
  auto fragments_of = [&](size_t primary, int n, std::vector<std::string>* units) {
    for (int f = 0; f < n; ++f) {
      size_t p = primary;
      if (np > 1 && rng.Bernoulli(options.cross_rate)) {
        p = (primary + 1 + rng.UniformInt(np - 1)) % np;
      }
      units->push_back(pick(out.groups[p]));
    }
  };
  auto body_of = [&](std::vector<std::string> units) {
    rng.Shuffle(std::span<std::string>(units));
    std::string body;
    for (const std::string& u : units) {
      if (!body.empty()) body += ' ';
      body += u;
    }
    if (!body.empty()) {
      body[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(body[0])));
      body += '.';
    }
    return body;
  };

  std::vector<Document> docs;
  int64_t clock = 1500000000;
  for (int th = 0; th < options.n_threads; ++th) {
    int topic = static_cast<int>(rng.UniformInt(static_cast<uint64_t>(n_semantic)));
    if (options.meta_topic && rng.Bernoulli(options.meta_share)) topic = n_semantic;
    const auto& words = out.topic_words[static_cast<size_t>(topic)];

    Document post;
    post.id = StrCat("t", th);
    post.thread_id = post.id;
    post.kind = DocKind::kPost;
    post.author = StrCat("u", rng.UniformInt(static_cast<uint64_t>(options.n_authors)));
    post.timestamp = clock;
    clock += 60;
    {
      std::vector<std::string> units;
      const int n_words = 2 * uniform_int(options.min_topic_words, options.max_topic_words);
      for (int i = 0; i < n_words; ++i) units.push_back(pick(words));
      for (int i = 0; i < 3; ++i) units.emplace_back(kFunctionWords[rng.UniformInt(12)]);
      fragments_of(rng.UniformInt(np), 2, &units);
      post.body = body_of(std::move(units));
    }
    post.score = static_cast<int64_t>(std::lround(3.0 + 2.0 * rng.Normal()));
    std::vector<std::string> thread_ids = {post.id};
    docs.push_back(post);
    out.doc_pattern.push_back(-1);
    out.doc_topic.push_back(topic);

    for (int r = 0; r < options.replies_per_thread; ++r) {
      Document reply;
      reply.id = StrCat(post.id, "_r", r);
      reply.parent_id = thread_ids[static_cast<size_t>(rng.UniformInt(thread_ids.size()))];
      reply.thread_id = post.id;
      reply.kind = DocKind::kReply;
      const size_t author = static_cast<size_t>(rng.UniformInt(static_cast<uint64_t>(options.n_authors)));
      reply.author = StrCat("u", author);
      reply.timestamp = clock;
      clock += 30;
      const size_t primary = rng.Categorical(out.author_preference[author]);

      std::vector<std::string> units;
      fragments_of(primary, uniform_int(options.min_fragments, options.max_fragments), &units);
      const int n_words = uniform_int(options.min_topic_words, options.max_topic_words);
      for (int i = 0; i < n_words; ++i) units.push_back(pick(words));
      const int n_function = uniform_int(2, 5);
      for (int i = 0; i < n_function; ++i) units.emplace_back(kFunctionWords[rng.UniformInt(12)]);
      if (!out.candidates[primary].empty() && rng.Bernoulli(options.candidate_rate)) {
        units.push_back(pick(out.candidates[primary]));
      }
      if (!out.noise_candidates.empty() && rng.Bernoulli(options.candidate_rate / 2)) {
        units.push_back(pick(out.noise_candidates));
      }
      reply.body = body_of(std::move(units));
      reply.delta_awarded = rng.Bernoulli(delta_rate[primary]);
      reply.score = static_cast<int64_t>(
          std::lround(score_mean[primary] + options.score_noise * rng.Normal()));
      thread_ids.push_back(reply.id);
      docs.push_back(std::move(reply));
      out.doc_pattern.push_back(static_cast<int>(primary));
      out.doc_topic.push_back(topic);
    }
  }
  out.corpus = Corpus(std::move(docs));
  return out;
}

}  // namespace argpat
