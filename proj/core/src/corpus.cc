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

#include "argpat/corpus.h"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "argpat/text.h"
#include "json.hpp"

namespace argpat {
namespace {

using nlohmann::json;

// Returns an error message, or nullopt when the field is usable.
std::optional<std::string> ReadOptionalString(const json& record,
                                              const char* key,
                                              std::optional<std::string>* out) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) {
    out->reset();
    return std::nullopt;
  }
  if (!it->is_string()) return StrCat("field '", key, "' is not a string");
  *out = it->get<std::string>();
  return std::nullopt;
}

std::optional<std::string> ParseRecord(const json& record, Document* doc) {
  if (!record.is_object()) return "record is not a JSON object";

  std::optional<std::string> id;
  if (auto err = ReadOptionalString(record, "id", &id)) return err;
  if (!id || id->empty()) return "record missing id";
  doc->id = *id;

  auto body = record.find("body");
  if (body == record.end()) return "record missing body";
  if (body->is_null()) {
    doc->body.clear();  // Deleted content keeps its place in the thread.
  } else if (body->is_string()) {
    doc->body = body->get<std::string>();
  } else {
    return "field 'body' is not a string";
  }

  if (auto err = ReadOptionalString(record, "parent_id", &doc->parent_id)) {
    return err;
  }
  if (doc->parent_id && doc->parent_id->empty()) doc->parent_id.reset();

  DocKind inferred = doc->parent_id ? DocKind::kReply : DocKind::kPost;
  if (auto kind = record.find("kind");
      kind != record.end() && !kind->is_null()) {
    if (!kind->is_string()) return "field 'kind' is not a string";
    const std::string value = kind->get<std::string>();
    if (value == "post") {
      doc->kind = DocKind::kPost;
    } else if (value == "reply") {
      doc->kind = DocKind::kReply;
    } else {
      return StrCat("unknown kind '", value, "'");
    }
    if (doc->kind != inferred) {
      return "kind must be 'post' exactly when parent_id is absent";
    }
  } else {
    doc->kind = inferred;
  }

  std::optional<std::string> thread;
  if (auto err = ReadOptionalString(record, "thread_id", &thread)) return err;
  if (thread && !thread->empty()) {
    doc->thread_id = *thread;
  } else if (doc->kind == DocKind::kPost) {
    doc->thread_id = doc->id;
  } else {
    return "reply missing thread_id";
  }

  std::optional<std::string> author;
  if (auto err = ReadOptionalString(record, "author", &author)) return err;
  doc->author = author.value_or("");

  if (auto score = record.find("score");
      score != record.end() && !score->is_null()) {
    if (!score->is_number_integer()) return "field 'score' is not an integer";
    doc->score = score->get<int64_t>();
  }
  if (auto delta = record.find("delta_awarded");
      delta != record.end() && !delta->is_null()) {
    if (!delta->is_boolean()) return "field 'delta_awarded' is not a boolean";
    doc->delta_awarded = delta->get<bool>();
  }
  if (doc->delta_awarded && doc->kind != DocKind::kReply) {
    return "delta_awarded is only allowed on replies";
  }
  if (auto ts = record.find("timestamp"); ts != record.end() && !ts->is_null()) {
    if (!ts->is_number_integer()) return "field 'timestamp' is not an integer";
    doc->timestamp = ts->get<int64_t>();
  }
  return std::nullopt;
}

}  // namespace

std::string_view DocKindName(DocKind kind) {
  return kind == DocKind::kPost ? "post" : "reply";
}

Corpus::Corpus(std::vector<Document> documents)
    : documents_(std::move(documents)) {
  index_.reserve(documents_.size());
  for (size_t i = 0; i < documents_.size(); ++i) {
    index_.emplace(documents_[i].id, i);
    if (documents_[i].kind == DocKind::kPost) {
      thread_post_.emplace(documents_[i].thread_id, i);
    }
  }
}

std::optional<size_t> Corpus::IndexOf(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<size_t> Corpus::ThreadPost(size_t i) const {
  auto it = thread_post_.find(documents_[i].thread_id);
  if (it == thread_post_.end()) return std::nullopt;
  return it->second;
}

CorpusStats ComputeStats(const Corpus& corpus) {
  CorpusStats stats;
  std::unordered_set<std::string_view> authors;
  size_t deltas = 0;
  for (const Document& doc : corpus.documents()) {
    if (doc.kind == DocKind::kPost) {
      ++stats.n_posts;
    } else {
      ++stats.n_replies;
      if (doc.delta_awarded) ++deltas;
    }
    authors.insert(doc.author);
  }
  stats.n_authors = authors.size();
  if (stats.n_replies > 0) {
    stats.delta_rate =
        static_cast<double>(deltas) / static_cast<double>(stats.n_replies);
  }
  return stats;
}

IngestResult IngestJsonlText(std::string_view text) {
  IngestResult result;
  std::vector<Document> parsed;
  std::vector<size_t> lines;
  std::unordered_set<std::string> seen;

  size_t line_no = 0;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded()) {
      result.rejected.push_back({line_no, "malformed JSON"});
      continue;
    }
    Document doc;
    if (auto err = ParseRecord(record, &doc)) {
      result.rejected.push_back({line_no, *err});
      continue;
    }
    if (!seen.insert(doc.id).second) {
      result.rejected.push_back(
          {line_no, StrCat("duplicate id '", doc.id, "'")});
      continue;
    }
    parsed.push_back(std::move(doc));
    lines.push_back(line_no);
  }

  // Parents may appear after their children, so thread linkage is checked
  // once everything is parsed. Rejecting a parent orphans its replies, so
  // iterate to a fixed point.
  std::vector<bool> keep(parsed.size(), true);
  std::unordered_map<std::string, size_t> by_id;
  for (size_t i = 0; i < parsed.size(); ++i) by_id.emplace(parsed[i].id, i);
  std::vector<std::string> reason(parsed.size());
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < parsed.size(); ++i) {
      if (!keep[i] || !parsed[i].parent_id) continue;
      auto it = by_id.find(*parsed[i].parent_id);
      if (it == by_id.end() || !keep[it->second]) {
        reason[i] = StrCat("parent '", *parsed[i].parent_id,
                                 "' not found");
      } else if (parsed[it->second].thread_id != parsed[i].thread_id) {
        reason[i] = StrCat("parent '", *parsed[i].parent_id,
                                 "' belongs to a different thread");
      } else {
        continue;
      }
      keep[i] = false;
      changed = true;
    }
  }

  std::vector<Document> accepted;
  accepted.reserve(parsed.size());
  std::vector<IngestIssue> orphaned;
  for (size_t i = 0; i < parsed.size(); ++i) {
    if (keep[i]) {
      accepted.push_back(std::move(parsed[i]));
    } else {
      orphaned.push_back({lines[i], reason[i]});
    }
  }
  result.rejected.insert(result.rejected.end(), orphaned.begin(),
                         orphaned.end());
  std::sort(result.rejected.begin(), result.rejected.end(),
            [](const IngestIssue& a, const IngestIssue& b) {
              return a.line < b.line;
            });

  result.corpus = Corpus(std::move(accepted));
  result.stats = ComputeStats(result.corpus);
  if (result.corpus.empty()) {
    result.warnings.push_back("corpus contains no documents");
  }
  return result;
}

absl::StatusOr<IngestResult> IngestJsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(StrCat("cannot read ", path.string()));
  }
  std::ostringstream contents;
  contents << in.rdbuf();
  return IngestJsonlText(contents.str());
}

std::string DocumentToJson(const Document& doc) {
  nlohmann::ordered_json record;
  record["id"] = doc.id;
  record["parent_id"] =
      doc.parent_id ? nlohmann::ordered_json(*doc.parent_id) : nullptr;
  record["thread_id"] = doc.thread_id;
  record["author"] = doc.author;
  record["kind"] = std::string(DocKindName(doc.kind));
  record["body"] = doc.body;
  record["score"] = doc.score;
  record["delta_awarded"] = doc.delta_awarded;
  record["timestamp"] = doc.timestamp;
  return record.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

CorpusView::CorpusView(const Corpus& corpus)
    : corpus_(&corpus),
      excluded_(corpus.size(), false),
      reasons_(corpus.size()) {}

std::vector<std::string> CorpusView::Exclude(
    const std::vector<std::string>& doc_ids, std::string_view reason) {
  std::vector<std::string> unknown;
  for (const std::string& id : doc_ids) {
    auto index = corpus_->IndexOf(id);
    if (!index) {
      unknown.push_back(id);
      continue;
    }
    if (!excluded_[*index]) {
      excluded_[*index] = true;
      reasons_[*index] = std::string(reason);
      ++n_excluded_;
    }
  }
  return unknown;
}

std::vector<size_t> CorpusView::Indices() const {
  std::vector<size_t> out;
  out.reserve(size());
  for (size_t i = 0; i < excluded_.size(); ++i) {
    if (!excluded_[i]) out.push_back(i);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> CorpusView::Exclusions()
    const {
  std::vector<std::pair<std::string, std::string>> out;
  for (size_t i = 0; i < excluded_.size(); ++i) {
    if (excluded_[i]) out.emplace_back((*corpus_)[i].id, reasons_[i]);
  }
  return out;
}

}  // namespace argpat
