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

#ifndef ARGPAT_CORPUS_H_
#define ARGPAT_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"

namespace argpat {

enum class DocKind { kPost, kReply };

std::string_view DocKindName(DocKind kind);

// One post or reply of a threaded discussion.
struct Document {
  std::string id;
  std::optional<std::string> parent_id;  // Absent for top-level posts.
  std::string thread_id;
  std::string author;
  DocKind kind = DocKind::kPost;
  std::string body;
  int64_t score = 0;
  bool delta_awarded = false;  // Only replies can carry a delta.
  int64_t timestamp = 0;

  friend bool operator==(const Document&, const Document&) = default;
};

struct CorpusStats {
  size_t n_posts = 0;
  size_t n_replies = 0;
  size_t n_authors = 0;
  double delta_rate = 0.0;  // Delta-tagged replies / n_replies.

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

// An immutable, validated set of documents in ingest order.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> documents);

  size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  const Document& operator[](size_t i) const { return documents_[i]; }
  const std::vector<Document>& documents() const { return documents_; }

  std::optional<size_t> IndexOf(std::string_view id) const;

  // Index of the top-level post of document i's thread, if present.
  std::optional<size_t> ThreadPost(size_t i) const;

 private:
  std::vector<Document> documents_;
  std::unordered_map<std::string, size_t> index_;
  std::unordered_map<std::string, size_t> thread_post_;
};

CorpusStats ComputeStats(const Corpus& corpus);

struct IngestIssue {
  size_t line = 0;  // 1-based line number in the input file.
  std::string message;
};

struct IngestResult {
  Corpus corpus;
  CorpusStats stats;
  std::vector<IngestIssue> rejected;
  std::vector<std::string> warnings;
};

// Parses a JSONL corpus. Malformed or invalid records are rejected and
// listed in IngestResult::rejected; only an unreadable file is an error.
absl::StatusOr<IngestResult> IngestJsonl(const std::filesystem::path& path);
IngestResult IngestJsonlText(std::string_view text);

// Canonical single-line JSON encoding used by the store.
std::string DocumentToJson(const Document& doc);

// A corpus with some documents hidden from downstream stages. Each
// exclusion carries a reason tag.
class CorpusView {
 public:
  explicit CorpusView(const Corpus& corpus);

  const Corpus& corpus() const { return *corpus_; }

  // Ids not found in the corpus are returned; the rest are excluded.
  std::vector<std::string> Exclude(const std::vector<std::string>& doc_ids,
                                   std::string_view reason);

  bool Contains(size_t i) const { return !excluded_[i]; }
  size_t size() const { return corpus_->size() - n_excluded_; }

  // Indices of visible documents in corpus order.
  std::vector<size_t> Indices() const;

  // (doc_id, reason) pairs in corpus order.
  std::vector<std::pair<std::string, std::string>> Exclusions() const;

 private:
  const Corpus* corpus_;
  std::vector<bool> excluded_;
  std::vector<std::string> reasons_;
  size_t n_excluded_ = 0;
};

}  // namespace argpat

#endif  // ARGPAT_CORPUS_H_
