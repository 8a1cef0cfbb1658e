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

#ifndef ARGPAT_STORE_H_
#define ARGPAT_STORE_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "argpat/corpus.h"

namespace argpat {

// A stored corpus lives in one directory:
//   manifest.json     name, counts, SHA-256 of documents.jsonl
//   documents.jsonl   canonical records in ingest order
//   exclusions.tsv    optional, doc_id<TAB>reason
inline constexpr char kManifestFile[] = "manifest.json";
inline constexpr char kDocumentsFile[] = "documents.jsonl";
inline constexpr char kExclusionsFile[] = "exclusions.tsv";

struct StoreManifest {
  std::string name;
  size_t n_documents = 0;
  CorpusStats stats;
  std::string content_sha256;
};

// Writes the corpus so that SaveCorpus(LoadCorpus(dir)) reproduces every
// file byte for byte.
absl::Status SaveCorpus(const std::filesystem::path& dir,
                        std::string_view name, const Corpus& corpus);

// Loads and verifies the content hash against the manifest.
absl::StatusOr<Corpus> LoadCorpus(const std::filesystem::path& dir);

absl::StatusOr<StoreManifest> ReadStoreManifest(
    const std::filesystem::path& dir);

std::string CorpusStatsToJson(const CorpusStats& stats);

absl::Status SaveExclusions(const std::filesystem::path& dir,
                            const CorpusView& view);

// Applies a stored exclusion list to the view. A missing file is a no-op.
absl::Status LoadExclusions(const std::filesystem::path& dir,
                            CorpusView* view);

}  // namespace argpat

#endif  // ARGPAT_STORE_H_
