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

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <map>

#include "argpat/rng.h"
#include "oracles/oracles.h"
#include "test_util.h"

namespace argpat {
namespace {

using ::testing::ElementsAre;

PatternLexicon Lexicon(const std::vector<std::pair<std::string, int>>& items,
                       int n_clusters) {
  PatternLexicon lex;
  lex.n_clusters = n_clusters;
  for (const auto& [text, k] : items) {
    lex.entries.push_back({*Fragment::Parse(text), k, Provenance::kSeed});
  }
  std::sort(lex.entries.begin(), lex.entries.end(),
            [](const LexiconEntry& a, const LexiconEntry& b) {
              return a.fragment < b.fragment;
            });
  return lex;
}

const std::vector<std::pair<std::string, int>> kSix = {
    {"never said", 0}, {"because", 1}, {"therefore", 2},
    {"causes", 3},     {"usually", 4}, {"i feel", 5}};

TEST(TagDocumentTest, RepeatedBigram) {
  PatternIndex index(Lexicon(kSix, 6));
  PatternVector v =
      TagDocument({"d", index.Prepare("He never said that. Never said it.")},
                  index);
  EXPECT_THAT(v.hits, ElementsAre(2, 0, 0, 0, 0, 0));
  EXPECT_EQ(v.total_hits, 2u);
  EXPECT_EQ(v.dominant, 0);
}

TEST(TagDocumentTest, TieHasNoDominant) {
  PatternIndex index(Lexicon(kSix, 6));
  PatternVector v = TagDocument({"d", {"because", "usually"}}, index);
  EXPECT_THAT(v.hits, ElementsAre(0, 1, 0, 0, 1, 0));
  EXPECT_FALSE(v.dominant.has_value());
  PatternVector none = TagDocument({"e", {"nothing", "here"}}, index);
  EXPECT_EQ(none.total_hits, 0u);
  EXPECT_FALSE(none.dominant.has_value());
}

TEST(TagDocumentTest, MatchesHandCounts) {
  PatternIndex index(Lexicon(kSix, 6));
  const std::map<std::string, int> pattern_of = {
      {"never_said", 0}, {"because", 1}, {"therefore", 2},
      {"causes", 3},     {"usually", 4}, {"i_feel", 5}};
  const std::vector<std::string> bodies = {
      "I feel that because it rains, it usually floods.",
      "Therefore, therefore, therefore.",
      "Smoking causes cancer because of tar.",
      "I never said that; I feel fine.",
      "Nothing to see.",
      "Usually, usually, because.",
      "i feel i feel i feel because therefore",
      "never said never said causes",
      "It causes, it causes, usually.",
      "Because because because i feel usually."};
  for (size_t i = 0; i < bodies.size(); ++i) {
    auto tokens = index.Prepare(bodies[i]);
    PatternVector v = TagDocument({StrCat("c", i), tokens}, index);
    auto expected = oracle::CountHits(tokens, pattern_of, 6);
    EXPECT_EQ(v.hits, expected) << bodies[i];
    uint32_t total = 0;
    for (uint32_t h : expected) total += h;
    EXPECT_EQ(v.total_hits, total);
    if (v.dominant) {
      for (int p = 0; p < 6; ++p) {
        if (p != *v.dominant) EXPECT_GT(v.hits[*v.dominant], v.hits[p]);
      }
    }
  }
}

Corpus PlantedShares() {
  // Each reply carries five hits of pattern 0, three of 1 and two of 2.
  std::vector<Document> docs;
  docs.push_back({.id = "p", .thread_id = "p", .author = "a",
                  .kind = DocKind::kPost, .body = "alpha alpha alpha"});
  for (int i = 0; i < 12; ++i) {
    docs.push_back({.id = StrCat("r", i), .parent_id = "p", .thread_id = "p",
                    .author = StrCat("u", i % 3), .kind = DocKind::kReply,
                    .body = "alpha alpha alpha alpha alpha beta beta beta "
                            "gamma gamma and some filler"});
  }
  docs.push_back({.id = "r_none", .parent_id = "p", .thread_id = "p",
                  .author = "u0", .kind = DocKind::kReply, .body = "filler"});
  return Corpus(docs);
}

TEST(PatternFrequenciesTest, PlantedShares) {
  Corpus corpus = PlantedShares();
  PatternIndex index(Lexicon({{"alpha", 0}, {"beta", 1}, {"gamma", 2}}, 3));
  auto tags = TagCorpus(corpus, index, 2);
  CorpusView view(corpus);
  auto freq = PatternFrequencies(view, tags);
  ASSERT_TRUE(freq.ok());
  EXPECT_THAT(*freq, ElementsAre(0.5, 0.3, 0.2));
  auto dominant = PatternFrequencies(view, tags, FrequencyMode::kDominantShare);
  ASSERT_TRUE(dominant.ok());
  EXPECT_THAT(*dominant, ElementsAre(1.0, 0.0, 0.0));
}

TEST(PatternFrequenciesTest, OrderInvariantAndSumsToOne) {
  Rng rng(6);
  const std::vector<std::string> words = {"alpha", "beta", "gamma", "x", "y"};
  std::vector<Document> docs = {{.id = "p", .thread_id = "p", .kind = DocKind::kPost}};
  for (int i = 0; i < 60; ++i) {
    std::string body;
    for (int j = 0; j < 6; ++j) StrAppend(&body, words[rng.UniformInt(5)], " ");
    docs.push_back({.id = StrCat("r", i), .parent_id = "p", .thread_id = "p",
                    .kind = DocKind::kReply, .body = body});
  }
  PatternIndex index(Lexicon({{"alpha", 0}, {"beta", 1}, {"gamma", 2}}, 3));
  Corpus a(docs);
  std::reverse(docs.begin() + 1, docs.end());
  Corpus b(docs);
  auto fa = *PatternFrequencies(CorpusView(a), TagCorpus(a, index));
  auto fb = *PatternFrequencies(CorpusView(b), TagCorpus(b, index));
  double sum = 0;
  for (size_t p = 0; p < 3; ++p) {
    EXPECT_NEAR(fa[p], fb[p], 1e-15);
    sum += fa[p];
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(PatternFrequenciesTest, NoHitsIsError) {
  Corpus corpus(std::vector<Document>{
      {.id = "p", .thread_id = "p", .kind = DocKind::kPost, .body = "alpha"},
      {.id = "r", .parent_id = "p", .thread_id = "p", .kind = DocKind::kReply,
       .body = "nothing"}});
  PatternIndex index(Lexicon({{"alpha", 0}}, 1));
  EXPECT_FALSE(PatternFrequencies(CorpusView(corpus), TagCorpus(corpus, index)).ok());
}

TEST(TagsCsvTest, RoundTripWithOneBasedPatterns) {
  Corpus corpus = PlantedShares();
  PatternIndex index(Lexicon({{"alpha", 0}, {"beta", 1}, {"gamma", 2}}, 3));
  auto tags = TagCorpus(corpus, index);
  const std::string csv = TagsToCsv(tags, 3);
  auto rows = testing::ReadCsv(csv);
  ASSERT_EQ(rows.size(), tags.size());
  EXPECT_EQ(rows[1]["hits_1"], "5");
  EXPECT_EQ(rows[1]["dominant"], "1");
  EXPECT_EQ(rows.back()["dominant"], "");
  auto back = ParseTagsCsv(csv);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, tags);
}

TEST(TagCorpusTest, WorkerCountDoesNotMatter) {
  Corpus corpus = PlantedShares();
  PatternIndex index(Lexicon({{"alpha", 0}, {"beta", 1}, {"gamma", 2}}, 3));
  EXPECT_EQ(TagCorpus(corpus, index, 1), TagCorpus(corpus, index, 4));
}

}  // namespace
}  // namespace argpat
