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

#include "argpat/pipeline.h"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "argpat/hash.h"
#include "json.hpp"
#include "test_util.h"

namespace argpat {
namespace {

using ::testing::Contains;
using ::testing::HasSubstr;
using ::testing::IsEmpty;

namespace fs = std::filesystem;

// The bundled mini inputs copied next to a config whose store is local.
class MiniConfig {
 public:
  MiniConfig() {
    for (const char* f : {"corpus.jsonl", "seeds.txt", "candidates.txt",
                          "markers.txt"}) {
      fs::copy_file(testing::DataDir() / "mini" / f, tmp_ / f);
    }
    auto text = ReadFile(testing::DataDir() / "mini" / "config.json");
    json_ = nlohmann::json::parse(*text);
    json_["store"] = "store";
  }

  nlohmann::json& json() { return json_; }
  fs::path dir() const { return tmp_.path(); }

  absl::StatusOr<ConfigCheck> Validate() const {
    return ValidateConfigText(json_.dump(), tmp_.path());
  }

 private:
  testing::TempDir tmp_;
  nlohmann::json json_;
};

std::vector<std::string> Fields(const ConfigCheck& check) {
  std::vector<std::string> out;
  for (const auto& e : check.errors) out.push_back(e.field);
  return out;
}

TEST(ConfigTest, BundledConfigIsValid) {
  auto check = ValidateConfig(testing::DataDir() / "mini" / "config.json");
  ASSERT_TRUE(check.ok()) << check.status();
  EXPECT_THAT(Fields(*check), IsEmpty());
  EXPECT_EQ(check->config.cluster.seed, 11u);
  EXPECT_EQ(check->config.pattern_names.at(0), "Personal");
  ASSERT_EQ(check->config.candidates.size(), 1u);
  EXPECT_EQ(check->config.candidates[0].tag, Provenance::kCogproc);
}

TEST(ConfigTest, NegativeMinDf) {
  MiniConfig c;
  c.json()["linkage"]["min_df"] = -1;
  auto check = c.Validate();
  ASSERT_TRUE(check.ok());
  EXPECT_THAT(Fields(*check), Contains("linkage.min_df"));
}

TEST(ConfigTest, ZeroTopics) {
  MiniConfig c;
  c.json()["topics"]["n_topics"] = 0;
  auto check = c.Validate();
  ASSERT_TRUE(check.ok());
  EXPECT_THAT(Fields(*check), Contains("topics.n_topics"));
}

TEST(ConfigTest, MissingSeedLexiconFile) {
  MiniConfig c;
  c.json()["seed_lexicon"] = "nope.txt";
  auto check = c.Validate();
  ASSERT_TRUE(check.ok());
  ASSERT_THAT(Fields(*check), Contains("seed_lexicon"));
  EXPECT_THAT(check->errors[0].ToString(), HasSubstr("nope.txt"));
}

TEST(ConfigTest, SeedsMustBeExplicitAndKeysKnown) {
  MiniConfig c;
  c.json()["cluster"].erase("seed");
  c.json()["analytics"].erase("seed");
  c.json()["linkage"]["min_dff"] = 3;
  c.json()["analytics"]["permutations"] = 10;
  auto check = c.Validate();
  ASSERT_TRUE(check.ok());
  EXPECT_THAT(Fields(*check), Contains("cluster.seed"));
  EXPECT_THAT(Fields(*check), Contains("analytics.seed"));
  EXPECT_THAT(Fields(*check), Contains("linkage.min_dff"));
  EXPECT_THAT(Fields(*check), Contains("analytics.permutations"));
}

TEST(ConfigTest, UnparsableText) {
  EXPECT_FALSE(ValidateConfigText("{not json", ".").ok());
}

TEST(RunManifestTest, JsonRoundTrip) {
  RunManifest m;
  m.toolkit_version = "1.0";
  m.config_sha256 = "abc";
  m.stages.push_back({"ingest", "h1", {{"documents.jsonl", "h2"}}});
  auto back = RunManifest::FromJson(m.ToJson());
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back->ToJson(), m.ToJson());
  ASSERT_NE(back->Find("ingest"), nullptr);
  EXPECT_EQ(*back->Find("ingest"), m.stages[0]);
  EXPECT_EQ(back->Find("tag"), nullptr);
}

std::map<std::string, std::string> Outputs(const fs::path& workdir) {
  auto tree = testing::ReadTree(workdir);
  tree.erase(files::kRunTimings);
  return tree;
}

TEST(PipelineTest, RunRerunAndForceAreIdentical) {
  MiniConfig c;
  auto check = c.Validate();
  ASSERT_TRUE(check.ok() && check->ok());
  const PipelineConfig& config = check->config;

  auto first = RunPipeline(config);
  ASSERT_TRUE(first.ok()) << first.status();
  EXPECT_THAT(first->skipped, IsEmpty());
  EXPECT_THAT(first->executed, Contains("expand:cogproc"));
  EXPECT_THAT(first->executed, Contains("report_profiles"));
  const auto tree = Outputs(config.workdir());
  for (const char* f : {files::kLexiconCsv, files::kTags, files::kDocTopics,
                        "reports/efficacy_delta.csv", "reports/factors.csv",
                        "reports/frequencies.csv", files::kRunManifest}) {
    EXPECT_EQ(tree.count(f), 1u) << f;
  }

  auto second = RunPipeline(config);
  ASSERT_TRUE(second.ok()) << second.status();
  EXPECT_THAT(second->executed, IsEmpty());
  EXPECT_EQ(second->skipped.size(), first->executed.size());
  EXPECT_EQ(Outputs(config.workdir()), tree);

  auto forced = RunPipeline(config, /*force=*/true);
  ASSERT_TRUE(forced.ok());
  EXPECT_EQ(forced->executed, first->executed);
  EXPECT_EQ(Outputs(config.workdir()), tree);
}

TEST(PipelineTest, ChangedParameterRerunsDownstreamOnly) {
  MiniConfig c;
  auto check = c.Validate();
  ASSERT_TRUE(check.ok() && check->ok());
  ASSERT_TRUE(RunPipeline(check->config).ok());

  c.json()["analytics"]["seed"] = 4;
  auto changed = c.Validate();
  ASSERT_TRUE(changed.ok() && changed->ok());
  auto run = RunPipeline(changed->config);
  ASSERT_TRUE(run.ok()) << run.status();
  EXPECT_THAT(run->skipped, Contains("cluster"));
  EXPECT_THAT(run->skipped, Contains("topics"));
  EXPECT_THAT(run->executed, Contains("report_delta"));
}

TEST(PipelineTest, DamagedOutputIsRebuilt) {
  MiniConfig c;
  auto check = c.Validate();
  ASSERT_TRUE(check.ok() && check->ok());
  ASSERT_TRUE(RunPipeline(check->config).ok());
  const fs::path tags = check->config.workdir() / files::kTags;
  auto original = ReadFile(tags);
  ASSERT_TRUE(WriteFile(tags, "garbage\n").ok());
  auto run = RunPipeline(check->config);
  ASSERT_TRUE(run.ok());
  EXPECT_THAT(run->executed, Contains("tag"));
  EXPECT_EQ(*ReadFile(tags), *original);
}

}  // namespace
}  // namespace argpat
