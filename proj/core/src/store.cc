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

#include "argpat/store.h"

#include <map>

#include "argpat/hash.h"
#include "argpat/text.h"
#include "json.hpp"

namespace argpat {
namespace {

using nlohmann::ordered_json;

ordered_json StatsJson(const CorpusStats& stats) {
  ordered_json j;
  j["n_posts"] = stats.n_posts;
  j["n_replies"] = stats.n_replies;
  j["n_authors"] = stats.n_authors;
  j["delta_rate"] = stats.delta_rate;
  return j;
}

}  // namespace

std::string CorpusStatsToJson(const CorpusStats& stats) {
  return StatsJson(stats).dump(2);
}

absl::Status SaveCorpus(const std::filesystem::path& dir,
                        std::string_view name, const Corpus& corpus) {
  std::string documents;
  for (const Document& doc : corpus.documents()) {
    documents += DocumentToJson(doc);
    documents += '\n';
  }
  ordered_json manifest;
  manifest["format_version"] = 1;
  manifest["name"] = std::string(name);
  manifest["n_documents"] = corpus.size();
  manifest["stats"] = StatsJson(ComputeStats(corpus));
  manifest["content_sha256"] = Sha256Hex(documents);

  if (auto status = WriteFile(dir / kDocumentsFile, documents); !status.ok()) {
    return status;
  }
  return WriteFile(dir / kManifestFile, manifest.dump(2) + "\n");
}

absl::StatusOr<StoreManifest> ReadStoreManifest(
    const std::filesystem::path& dir) {
  auto text = ReadFile(dir / kManifestFile);
  if (!text.ok()) return text.status();
  auto j = nlohmann::json::parse(*text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::DataLossError(
        StrCat("corrupt manifest in ", dir.string()));
  }
  try {
    StoreManifest manifest;
    manifest.name = j.at("name").get<std::string>();
    manifest.n_documents = j.at("n_documents").get<size_t>();
    const auto& stats = j.at("stats");
    manifest.stats.n_posts = stats.at("n_posts").get<size_t>();
    manifest.stats.n_replies = stats.at("n_replies").get<size_t>();
    manifest.stats.n_authors = stats.at("n_authors").get<size_t>();
    manifest.stats.delta_rate = stats.at("delta_rate").get<double>();
    manifest.content_sha256 = j.at("content_sha256").get<std::string>();
    return manifest;
  } catch (const nlohmann::json::exception& e) {
    return absl::DataLossError(
        StrCat("corrupt manifest in ", dir.string(), ": ", e.what()));
  }
}

absl::StatusOr<Corpus> LoadCorpus(const std::filesystem::path& dir) {
  auto manifest = ReadStoreManifest(dir);
  if (!manifest.ok()) return manifest.status();
  auto documents = ReadFile(dir / kDocumentsFile);
  if (!documents.ok()) return documents.status();
  if (Sha256Hex(*documents) != manifest->content_sha256) {
    return absl::DataLossError(
        StrCat("content hash mismatch in ", dir.string()));
  }
  IngestResult parsed = IngestJsonlText(*documents);
  if (!parsed.rejected.empty()) {
    return absl::DataLossError(StrCat(
        "stored record on line ", parsed.rejected.front().line,
        " is invalid: ", parsed.rejected.front().message));
  }
  if (parsed.corpus.size() != manifest->n_documents) {
    return absl::DataLossError("document count does not match manifest");
  }
  return std::move(parsed.corpus);
}

absl::Status SaveExclusions(const std::filesystem::path& dir,
                            const CorpusView& view) {
  std::string out;
  for (const auto& [id, reason] : view.Exclusions()) {
    StrAppend(&out, id, "\t", reason, "\n");
  }
  return WriteFile(dir / kExclusionsFile, out);
}

absl::Status LoadExclusions(const std::filesystem::path& dir,
                            CorpusView* view) {
  const auto path = dir / kExclusionsFile;
  if (!std::filesystem::exists(path)) return absl::OkStatus();
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  std::map<std::string, std::vector<std::string>> by_reason;
  for (std::string_view line : Split(*text, '\n', true)) {
    std::vector<std::string_view> fields = Split(line, '\t');
    if (fields.size() != 2) {
      return absl::DataLossError(
          StrCat("malformed exclusion line: ", line));
    }
    by_reason[std::string(fields[1])].emplace_back(fields[0]);
  }
  for (const auto& [reason, ids] : by_reason) {
    auto unknown = view->Exclude(ids, reason);
    if (!unknown.empty()) {
      return absl::DataLossError(
          StrCat("exclusion refers to unknown document ", unknown[0]));
    }
  }
  return absl::OkStatus();
}

}  // namespace argpat
