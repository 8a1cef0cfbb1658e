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

#include "argpat/phrases.h"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <set>

#include "argpat/rng.h"
#include "oracles/oracles.h"
#include "test_util.h"

namespace argpat {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::IsEmpty;

SeedLexicon Seeds(std::vector<std::string> words) {
  SeedLexicon s;
  s.categories.push_back({"c", std::move(words)});
  return s;
}

TEST(SeedLexiconTest, TwoCategories) {
  auto r = ParseSeedLexicon("#tentative\nlikely\nvaguely\n#certain\nsurely\nclearly");
  ASSERT_TRUE(r.ok()) << r.status();
  const auto& cats = r->lexicon.categories;
  ASSERT_EQ(cats.size(), 2u);
  EXPECT_EQ(cats[0].name, "tentative");
  EXPECT_THAT(cats[0].words, ElementsAre("likely", "vaguely"));
  EXPECT_THAT(cats[1].words, ElementsAre("surely", "clearly"));
  EXPECT_THAT(r->warnings, IsEmpty());
  EXPECT_THAT(r->lexicon.Words(),
              ElementsAre("clearly", "likely", "surely", "vaguely"));
}

TEST(SeedLexiconTest, DuplicateNamesTheWord) {
  auto r = ParseSeedLexicon("#tentative\nlikely\nlikely\n");
  ASSERT_FALSE(r.ok());
  EXPECT_THAT(std::string(r.status().message()), HasSubstr("likely"));
}

TEST(SeedLexiconTest, EmptyCategoryWarns) {
  auto r = ParseSeedLexicon("#tentative\n");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->lexicon.categories.size(), 1u);
  EXPECT_THAT(r->lexicon.categories[0].words, IsEmpty());
  EXPECT_FALSE(r->warnings.empty());
}

TEST(SeedLexiconTest, Errors) {
  EXPECT_FALSE(ParseSeedLexicon("").ok());
  EXPECT_FALSE(ParseSeedLexicon("#c\ntwo words\n").ok());
  EXPECT_FALSE(ParseSeedLexicon("orphan\n#c\nx\n").ok());
}

TEST(DetectBigramsTest, ScoreFollowsFormula) {
  std::vector<std::vector<std::string>> docs(100, {"necessarily", "true"});
  const SeedLexicon seeds = Seeds({"true"});
  const double expected =
      oracle::PhraseScore(docs, "necessarily", "true", 5);
  EXPECT_DOUBLE_EQ(expected, 1.9);

  PhraseScoreTable table = ScorePhrases(docs, seeds, {5, 10.0, 1});
  ASSERT_EQ(table.entries.size(), 1u);
  EXPECT_EQ(table.total_tokens, 200u);
  EXPECT_EQ(table.entries[0].second.pair_count, 100u);
  EXPECT_DOUBLE_EQ(table.entries[0].second.score, expected);

  EXPECT_THAT(DetectBigrams(docs, seeds, {5, 10.0, 1}), IsEmpty());
  auto low = DetectBigrams(docs, seeds, {5, 1.0, 1});
  ASSERT_EQ(low.size(), 1u);
  EXPECT_EQ(low[0].fragment.text, "necessarily true");
  EXPECT_EQ(low[0].fragment.arity, Arity::kBigram);
}

TEST(DetectBigramsTest, CountFloor) {
  std::vector<std::vector<std::string>> docs;
  for (uint32_t i = 0; i < 50; ++i) {
    docs.push_back({"filler", StrCat("w", i), "true"});
  }
  EXPECT_THAT(DetectBigrams(docs, Seeds({"true"}), {5, 0.0, 1}), IsEmpty());
}

TEST(DetectBigramsTest, SeedFilter) {
  std::vector<std::vector<std::string>> docs(200, {"very", "frequent", "pair"});
  EXPECT_THAT(DetectBigrams(docs, Seeds({"absent"}), {1, 0.0, 1}), IsEmpty());
}

TEST(DetectBigramsTest, WorkerCountAndMonotonicity) {
  Rng rng(17);
  const std::vector<std::string> words = {"i",     "think", "so",   "maybe",
                                          "true",  "not",   "sure", "clearly",
                                          "wrong", "is"};
  std::vector<std::vector<std::string>> docs;
  for (int d = 0; d < 300; ++d) {
    std::vector<std::string> doc;
    const int len = 5 + static_cast<int>(rng.UniformInt(10));
    for (int i = 0; i < len; ++i) {
      if (rng.Bernoulli(0.2)) {
        doc.push_back("i");
        doc.push_back("think");
      } else {
        doc.push_back(words[rng.UniformInt(words.size())]);
      }
    }
    docs.push_back(doc);
  }
  const SeedLexicon seeds = Seeds({"think", "true", "sure"});
  auto one = DetectBigrams(docs, seeds, {3, 0.5, 1});
  auto four = DetectBigrams(docs, seeds, {3, 0.5, 4});
  ASSERT_EQ(one.size(), four.size());
  for (size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].fragment, four[i].fragment);
    EXPECT_EQ(one[i].score, four[i].score);
    EXPECT_GE(i == 0 ? one[i].score : one[i - 1].score, one[i].score);
    auto parts = Split(one[i].fragment.text, ' ');
    EXPECT_TRUE(parts[0] == "think" || parts[0] == "true" ||
                parts[0] == "sure" || parts[1] == "think" ||
                parts[1] == "true" || parts[1] == "sure");
    EXPECT_DOUBLE_EQ(one[i].score,
                     oracle::PhraseScore(docs, std::string(parts[0]),
                                         std::string(parts[1]), 3));
  }
  ASSERT_FALSE(one.empty());
  EXPECT_EQ(one[0].fragment.text, "i think");

  std::set<std::string> loose, strict;
  for (const auto& b : one) loose.insert(b.fragment.text);
  for (const auto& b : DetectBigrams(docs, seeds, {6, 2.0, 1})) {
    strict.insert(b.fragment.text);
  }
  for (const auto& s : strict) EXPECT_EQ(loose.count(s), 1u) << s;
}

TEST(MergePhrasesTest, Examples) {
  auto bigrams = [](std::vector<std::string> texts) {
    std::vector<Fragment> f;
    for (const auto& t : texts) f.push_back(*Fragment::Parse(t));
    return BigramSet(f);
  };
  const std::vector<std::string> a = {"necessarily", "true", "story"};
  EXPECT_THAT(MergePhrases(a, bigrams({"necessarily true"})),
              ElementsAre("necessarily_true", "story"));
  const std::vector<std::string> b = {"true", "true"};
  EXPECT_THAT(MergePhrases(b, bigrams({"true true"})), ElementsAre("true_true"));
  const std::vector<std::string> c = {"a", "b", "c"};
  EXPECT_THAT(MergePhrases(c, bigrams({"a b", "b c"})), ElementsAre("a_b", "c"));
  const std::vector<std::string> d = {"x", "y"};
  EXPECT_THAT(MergePhrases(d, bigrams({"a b"})), ElementsAre("x", "y"));
}

TEST(FragmentTest, ParseAndToken) {
  auto f = Fragment::Parse("don't see");
  ASSERT_TRUE(f.ok());
  EXPECT_EQ(f->Token(), "don't_see");
  EXPECT_EQ(Fragment::FromToken("don't_see"), *f);
  EXPECT_EQ(Fragment::FromToken("true").arity, Arity::kUnigram);
  EXPECT_FALSE(Fragment::Parse("a  b").ok());
  EXPECT_FALSE(Fragment::Parse("a_b").ok());
  EXPECT_FALSE(Fragment::Parse("").ok());
}

TEST(InventoryTest, TsvRoundTrip) {
  std::vector<std::vector<std::string>> docs(20, {"i", "think", "so"});
  const SeedLexicon seeds = Seeds({"think", "unused"});
  auto bigrams = DetectBigrams(docs, seeds, {1, 0.0, 1});
  FragmentInventory inv = BuildInventory(docs, seeds, bigrams);
  auto parsed = ParseInventoryTsv(InventoryToTsv(inv));
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(InventoryToTsv(*parsed), InventoryToTsv(inv));
  EXPECT_EQ(parsed->Fragments(), inv.Fragments());
}

}  // namespace
}  // namespace argpat
