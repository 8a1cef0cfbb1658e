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

#include <chrono>
#include <ctime>
#include <functional>
#include <memory>
#include <set>

#include <fmt/format.h>

#include "argpat/hash.h"
#include "argpat/linkage.h"
#include "argpat/parallel.h"
#include "argpat/phrases.h"
#include "argpat/store.h"
#include "argpat/tokenize.h"
#include "argpat/topics.h"
#include "json.hpp"

namespace argpat {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

absl::Status Annotate(const absl::Status& status, std::string_view context) {
  return absl::Status(status.code(), StrCat(context, ": ", std::string(status.message())));
}

void Log(std::string_view message) { fmt::print(stderr, "{}\n", message); }

std::vector<size_t> Scope(const Corpus& corpus, bool posts_only) {
  std::vector<size_t> out;
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (!posts_only || corpus[i].kind == DocKind::kPost) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<std::string>> TokenizeDocs(
    const Corpus& corpus, std::span<const size_t> indices, int workers) {
  std::vector<std::vector<std::string>> out(indices.size());
  ParallelChunks(indices.size(), workers,
                 [&](size_t, size_t begin, size_t end) {
                   for (size_t i = begin; i < end; ++i) {
                     out[i] = Tokenize(corpus[indices[i]].body);
                   }
                 });
  return out;
}

std::vector<TokenStream> MergedStreams(const Corpus& corpus,
                                       std::span<const size_t> indices,
                                       const BigramSet& bigrams, int workers) {
  std::vector<TokenStream> out(indices.size());
  ParallelChunks(indices.size(), workers,
                 [&](size_t, size_t begin, size_t end) {
                   for (size_t i = begin; i < end; ++i) {
                     const Document& doc = corpus[indices[i]];
                     out[i].doc_id = doc.id;
                     out[i].tokens = MergePhrases(Tokenize(doc.body), bigrams);
                   }
                 });
  return out;
}

absl::StatusOr<FragmentInventory> LoadInventory(const fs::path& dir) {
  auto text = ReadFile(dir / files::kFragments);
  if (!text.ok()) return text.status();
  return ParseInventoryTsv(*text);
}

absl::StatusOr<PatternLexicon> LoadLexicon(const fs::path& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseLexiconJson(*text);
}

// Everything the report stages read.
struct Loaded {
  Corpus corpus;
  std::unique_ptr<CorpusView> view;
  std::vector<PatternVector> tags;
  int n_patterns = 0;
};

absl::StatusOr<std::unique_ptr<Loaded>> LoadForReports(const fs::path& dir) {
  auto loaded = std::make_unique<Loaded>();
  auto corpus = LoadCorpus(dir);
  if (!corpus.ok()) return corpus.status();
  loaded->corpus = *std::move(corpus);
  loaded->view = std::make_unique<CorpusView>(loaded->corpus);
  if (auto s = LoadExclusions(dir, loaded->view.get()); !s.ok()) return s;
  auto tags_text = ReadFile(dir / files::kTags);
  if (!tags_text.ok()) return tags_text.status();
  auto tags = ParseTagsCsv(*tags_text);
  if (!tags.ok()) return tags.status();
  if (tags->size() != loaded->corpus.size()) {
    return absl::FailedPreconditionError(
        "tags.csv does not match the corpus; rerun tagging");
  }
  for (size_t i = 0; i < tags->size(); ++i) {
    if ((*tags)[i].doc_id != loaded->corpus[i].id) {
      return absl::FailedPreconditionError(
          "tags.csv does not match the corpus; rerun tagging");
    }
  }
  loaded->tags = *std::move(tags);
  loaded->n_patterns =
      loaded->tags.empty() ? 0 : static_cast<int>(loaded->tags[0].hits.size());
  return loaded;
}

absl::Status WriteOut(const fs::path& dir, std::string_view name,
                      std::string_view contents) {
  return WriteFile(dir / name, contents);
}

}  // namespace

std::string_view ToolkitVersion() {
#ifdef ARGPAT_VERSION
  return ARGPAT_VERSION;
#else
  return "unknown";
#endif
}

absl::StatusOr<IngestResult> StageIngest(const fs::path& input,
                                         const fs::path& dir,
                                         std::string_view name) {
  auto result = IngestJsonl(input);
  if (!result.ok()) return result.status();
  for (const IngestIssue& issue : result->rejected) {
    Log(StrCat("ingest: line ", issue.line, " rejected: ", issue.message));
  }
  for (const std::string& w : result->warnings) Log(StrCat("ingest: ", w));
  if (auto s = SaveCorpus(dir, name, result->corpus); !s.ok()) return s;
  return result;
}

absl::Status StagePhrases(const fs::path& dir, const fs::path& seeds,
                          const PhraseParams& params, int workers) {
  auto corpus = LoadCorpus(dir);
  if (!corpus.ok()) return corpus.status();
  auto parsed = LoadSeedLexicon(seeds);
  if (!parsed.ok()) return parsed.status();
  for (const std::string& w : parsed->warnings) Log(StrCat("phrases: ", w));
  const std::vector<size_t> scope = Scope(*corpus, params.posts_only);
  const auto docs = TokenizeDocs(*corpus, scope, workers);
  PhraseOptions options;
  options.min_count = params.min_count;
  options.threshold = params.threshold;
  options.workers = workers;
  const auto bigrams = DetectBigrams(docs, parsed->lexicon, options);
  const FragmentInventory inventory =
      BuildInventory(docs, parsed->lexicon, bigrams);
  Log(StrCat("phrases: ", inventory.entries.size() - bigrams.size(),
             " seed words, ", bigrams.size(), " bigrams"));
  return WriteOut(dir, files::kFragments, InventoryToTsv(inventory));
}

absl::Status StageLinkage(const fs::path& dir, const LinkageParams& params,
                          int workers) {
  auto corpus = LoadCorpus(dir);
  if (!corpus.ok()) return corpus.status();
  auto inventory = LoadInventory(dir);
  if (!inventory.ok()) return inventory.status();
  const std::vector<Fragment> fragments = inventory->Fragments();
  const std::vector<size_t> scope = Scope(*corpus, params.posts_only);
  const auto streams =
      MergedStreams(*corpus, scope, BigramSet(fragments), workers);
  auto counts = FragmentCounts::Count(streams, fragments);
  if (!counts.ok()) return counts.status();
  auto network = BuildNetwork(*counts, params.min_df);
  if (!network.ok()) return network.status();
  Log(StrCat("linkage: ", network->nodes.size(), " nodes, ",
             network->edges.size(), " edges over ", counts->num_docs(),
             " documents"));
  if (auto s = WriteOut(dir, files::kCounts, CountsToTsv(*counts)); !s.ok()) {
    return s;
  }
  if (auto s = WriteOut(dir, files::kNetwork, NetworkToTsv(*network));
      !s.ok()) {
    return s;
  }
  return WriteOut(dir, files::kNetworkNodes, NetworkNodesToText(*network));
}

absl::Status StageCluster(const fs::path& dir, const ClusterParams& params,
                          std::string_view out_lexicon) {
  auto edges = ReadFile(dir / files::kNetwork);
  if (!edges.ok()) return edges.status();
  auto nodes = ReadFile(dir / files::kNetworkNodes);
  if (!nodes.ok()) return nodes.status();
  auto network = ParseNetworkTsv(*edges, *nodes);
  if (!network.ok()) return network.status();
  auto partition = Louvain(*network, params.seed, params.resolution,
                            params.restarts);
  if (!partition.ok()) return partition.status();
  auto lexicon = BuildLexicon(*network, *partition, params.resolution);
  if (!lexicon.ok()) return lexicon.status();
  Log(StrCat("cluster: ", lexicon->n_clusters, " patterns, modularity ",
             FormatDouble(lexicon->modularity())));
  return WriteOut(dir, out_lexicon, LexiconToJson(*lexicon));
}

absl::Status StageExpand(const fs::path& dir, const CandidateSource& source,
                         const LinkageParams& scope, bool freeze_counts,
                         std::string_view in_lexicon,
                         std::string_view out_lexicon, int workers) {
  auto corpus = LoadCorpus(dir);
  if (!corpus.ok()) return corpus.status();
  auto inventory = LoadInventory(dir);
  if (!inventory.ok()) return inventory.status();
  auto lexicon = LoadLexicon(dir / in_lexicon);
  if (!lexicon.ok()) return lexicon.status();
  auto candidates_text = ReadFile(source.path);
  if (!candidates_text.ok()) return candidates_text.status();
  auto candidates = ParseFragmentList(*candidates_text);
  if (!candidates.ok()) return candidates.status();

  std::set<Fragment> all;
  for (const Fragment& f : inventory->Fragments()) all.insert(f);
  for (const Fragment& f : lexicon->Fragments()) all.insert(f);
  for (const Fragment& f : *candidates) all.insert(f);
  const std::vector<Fragment> fragments(all.begin(), all.end());
  const std::vector<size_t> indices = Scope(*corpus, scope.posts_only);
  const auto streams =
      MergedStreams(*corpus, indices, BigramSet(fragments), workers);
  auto counts = FragmentCounts::Count(streams, fragments);
  if (!counts.ok()) return counts.status();

  ExpansionOptions options;
  options.tag = source.tag;
  options.freeze_counts = freeze_counts;
  auto result = ExpandLexicon(*counts, *lexicon, *candidates, options);
  if (!result.ok()) return result.status();
  size_t accepted = 0;
  for (const AdmissionRecord& r : result->log) accepted += r.accepted ? 1 : 0;
  for (const std::string& s : result->skipped) Log(StrCat("expand: skipped ", s));
  Log(StrCat("expand(", ProvenanceName(source.tag), "): admitted ", accepted,
             " of ", result->log.size(), " candidates"));
  const std::string log_name =
      StrCat("admissions_", ProvenanceName(source.tag), ".csv");
  if (auto s = WriteOut(dir, log_name, AdmissionLogToCsv(result->log));
      !s.ok()) {
    return s;
  }
  return WriteOut(dir, out_lexicon, LexiconToJson(result->lexicon));
}

absl::Status StagePublishLexicon(const fs::path& dir,
                                 std::string_view lexicon) {
  auto text = ReadFile(dir / lexicon);
  if (!text.ok()) return text.status();
  auto parsed = ParseLexiconJson(*text);
  if (!parsed.ok()) return parsed.status();
  if (lexicon != files::kLexiconJson) {
    if (auto s = WriteOut(dir, files::kLexiconJson, *text); !s.ok()) return s;
  }
  return WriteOut(dir, files::kLexiconCsv, LexiconToCsv(*parsed));
}

absl::Status StageTopics(const fs::path& dir, const TopicParams& params,
                         int workers) {
  auto corpus = LoadCorpus(dir);
  if (!corpus.ok()) return corpus.status();
  auto lexicon = LoadLexicon(dir / files::kLexiconJson);
  if (!lexicon.ok()) return lexicon.status();
  std::vector<std::string> pronouns = DefaultPronouns();
  if (params.pronouns) {
    auto text = ReadFile(*params.pronouns);
    if (!text.ok()) return text.status();
    pronouns = ParseWordList(*text);
  }
  const std::vector<size_t> posts = Scope(*corpus, /*posts_only=*/true);
  const auto docs = TokenizeDocs(*corpus, posts, workers);
  const std::vector<Fragment> fragments = lexicon->Fragments();
  auto vocab = BuildTopicVocab(docs, fragments, pronouns, DefaultStopwords(),
                               params.min_df);
  if (!vocab.ok()) return vocab.status();
  std::vector<TokenStream> streams(posts.size());
  for (size_t i = 0; i < posts.size(); ++i) {
    streams[i] = {(*corpus)[posts[i]].id, docs[i]};
  }
  LdaOptions options;
  options.n_topics = params.n_topics;
  options.alpha = params.alpha;
  options.beta = params.beta;
  options.iterations = params.iterations;
  options.seed = params.seed;
  auto fit = FitLda(streams, *vocab, options);
  if (!fit.ok()) return fit.status();
  for (const std::string& w : fit->warnings) Log(StrCat("topics: ", w));
  Log(StrCat("topics: ", params.n_topics, " topics over ", posts.size(),
             " posts, vocabulary ", vocab->size()));
  if (auto s = SaveTopicModel(dir / files::kTopicModel, fit->model); !s.ok()) {
    return s;
  }
  return WriteOut(dir, files::kDocTopics,
                  DocTopicsToCsv(fit->docs, params.n_topics));
}

absl::Status StageFlagMeta(const fs::path& dir,
                           const std::vector<std::string>& markers,
                           double threshold) {
  auto corpus = LoadCorpus(dir);
  if (!corpus.ok()) return corpus.status();
  auto model = LoadTopicModel(dir / files::kTopicModel);
  if (!model.ok()) return model.status();
  auto doc_topics_text = ReadFile(dir / files::kDocTopics);
  if (!doc_topics_text.ok()) return doc_topics_text.status();
  auto doc_topics = ParseDocTopicsCsv(*doc_topics_text);
  if (!doc_topics.ok()) return doc_topics.status();

  const auto meta = ScoreMetaTopics(*model, markers, threshold);
  std::set<int> flagged;
  for (const MetaTopic& m : meta) {
    if (m.flagged) flagged.insert(m.topic);
  }
  std::set<std::string> threads;
  for (const DocTopics& d : *doc_topics) {
    if (d.empty || !flagged.contains(d.dominant)) continue;
    if (auto i = corpus->IndexOf(d.doc_id)) threads.insert((*corpus)[*i].thread_id);
  }
  std::vector<std::string> ids;
  for (const Document& doc : corpus->documents()) {
    if (threads.contains(doc.thread_id)) ids.push_back(doc.id);
  }
  CorpusView view(*corpus);
  view.Exclude(ids, "meta_topic");
  Log(StrCat("flag-meta: ", flagged.size(), " topics flagged, ", ids.size(),
             " documents excluded"));
  if (auto s = WriteOut(dir, files::kMetaTopics, TopicsCsv(*model, meta));
      !s.ok()) {
    return s;
  }
  return SaveExclusions(dir, view);
}

absl::Status StageTag(const fs::path& dir, const fs::path& lexicon_path,
                      int workers) {
  auto corpus = LoadCorpus(dir);
  if (!corpus.ok()) return corpus.status();
  auto lexicon = LoadLexicon(lexicon_path.is_absolute() ? lexicon_path
                                                        : dir / lexicon_path);
  if (!lexicon.ok()) return lexicon.status();
  const PatternIndex index(*lexicon);
  const auto tags = TagCorpus(*corpus, index, workers);
  size_t dominated = 0;
  for (const PatternVector& t : tags) dominated += t.dominant ? 1 : 0;
  Log(StrCat("tag: ", tags.size(), " documents, ", dominated,
             " with a dominant pattern"));
  return WriteOut(dir, files::kTags, TagsToCsv(tags, lexicon->n_clusters));
}

absl::Status StageReportFrequencies(const fs::path& dir, FrequencyMode mode,
                                    const NameMap& names) {
  auto loaded = LoadForReports(dir);
  if (!loaded.ok()) return loaded.status();
  auto freq = PatternFrequencies(*(*loaded)->view, (*loaded)->tags, mode);
  if (!freq.ok()) return freq.status();
  const fs::path out = dir / files::kReports;
  if (auto s = WriteOut(out, "frequencies.csv", FrequenciesToCsv(*freq, names));
      !s.ok()) {
    return s;
  }
  return WriteOut(out, "frequencies.json",
                  FrequenciesToJson(*freq, names, mode));
}

absl::Status StageReportEfficacy(const fs::path& dir, Outcome outcome,
                                 const AnalyticsParams& params,
                                 const NameMap& names, int workers) {
  auto loaded_or = LoadForReports(dir);
  if (!loaded_or.ok()) return loaded_or.status();
  const Loaded& loaded = **loaded_or;
  auto model = LoadTopicModel(dir / files::kTopicModel);
  if (!model.ok()) return model.status();
  auto doc_topics_text = ReadFile(dir / files::kDocTopics);
  if (!doc_topics_text.ok()) return doc_topics_text.status();
  auto doc_topics = ParseDocTopicsCsv(*doc_topics_text);
  if (!doc_topics.ok()) return doc_topics.status();

  const auto topics = ThreadTopics(loaded.corpus, *doc_topics);
  const EfficacySample sample = CollectEfficacySample(
      *loaded.view, loaded.tags, topics, loaded.n_patterns, outcome);
  std::vector<EfficacyRow> rows =
      ComputeEfficacy(sample, outcome, params.n_floor);
  if (auto s = Significance(sample, outcome, params.permutations, params.seed,
                            rows, workers);
      !s.ok()) {
    return s;
  }
  NameMap labels;
  for (int k = 0; k < model->n_topics; ++k) labels[k] = model->Label(k);
  const std::string o(OutcomeName(outcome));
  const fs::path out = dir / files::kReports;
  if (auto s = WriteOut(out, StrCat("efficacy_", o, ".csv"),
                        EfficacyTableCsv(rows, outcome, loaded.n_patterns,
                                         names, labels));
      !s.ok()) {
    return s;
  }
  if (auto s = WriteOut(out, StrCat("efficacy_", o, "_long.csv"),
                        EfficacyLongCsv(rows, outcome, names, labels));
      !s.ok()) {
    return s;
  }
  return WriteOut(out, StrCat("efficacy_", o, ".json"),
                  EfficacyToJson(rows, outcome, names, labels));
}

absl::Status StageReportProfiles(const fs::path& dir,
                                 const AnalyticsParams& params,
                                 const NameMap& names) {
  auto loaded_or = LoadForReports(dir);
  if (!loaded_or.ok()) return loaded_or.status();
  const Loaded& loaded = **loaded_or;
  auto profiles = BuildProfiles(*loaded.view, loaded.tags, params.min_comments);
  if (!profiles.ok()) return profiles.status();
  auto pca = PcaProfiles(*profiles, names);
  if (!pca.ok()) return pca.status();
  auto quadrants = QuadrantBonus(*profiles, *pca, *loaded.view, loaded.tags);
  if (!quadrants.ok()) return quadrants.status();
  Log(StrCat("profiles: ", profiles->size(), " users, PC1 ",
             fmt::format("{:.2f}", pca->explained[0]), ", PC2 ",
             fmt::format("{:.2f}", pca->explained[1])));
  const fs::path out = dir / files::kReports;
  if (auto s = WriteOut(out, "profiles.csv", ProfilesCsv(*profiles, &*pca, names));
      !s.ok()) {
    return s;
  }
  if (auto s = WriteOut(out, "factors.csv", FactorTableCsv(*pca, names));
      !s.ok()) {
    return s;
  }
  if (auto s = WriteOut(out, "factors.json", FactorTableJson(*pca, names));
      !s.ok()) {
    return s;
  }
  if (auto s = WriteOut(out, "quadrants.csv", QuadrantsCsv(*quadrants));
      !s.ok()) {
    return s;
  }
  return WriteOut(out, "quadrants.json", QuadrantsJson(*quadrants));
}

// ---------------------------------------------------------------------------
// Configuration.

namespace {

class ConfigReader {
 public:
  ConfigReader(const fs::path& base_dir, std::vector<ConfigError>* errors)
      : base_dir_(base_dir), errors_(errors) {}

  void Error(std::string field, std::string message) {
    errors_->push_back({std::move(field), std::move(message)});
  }

  // Returns the object at key, or nullptr when absent or invalid.
  const json* Section(const json& parent, const std::string& prefix,
                      const char* key,
                      std::initializer_list<const char*> allowed) {
    auto it = parent.find(key);
    if (it == parent.end()) return nullptr;
    const std::string name = Join(prefix, key);
    if (!it->is_object()) {
      Error(name, "must be an object");
      return nullptr;
    }
    CheckKeys(*it, name, allowed);
    return &*it;
  }

  void CheckKeys(const json& obj, const std::string& prefix,
                 std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
      bool known = false;
      for (const char* a : allowed) known = known || key == a;
      if (!known) Error(Join(prefix, key.c_str()), "unknown field");
    }
  }

  template <typename T>
  void Int(const json* obj, const std::string& prefix, const char* key,
           int64_t min, T* out, bool required = false) {
    const std::string name = Join(prefix, key);
    const json* v = Find(obj, key);
    if (v == nullptr) {
      if (required) Error(name, "is required");
      return;
    }
    if (!v->is_number_integer()) {
      Error(name, StrCat("must be an integer >= ", min));
      return;
    }
    if (v->is_number_unsigned()) {
      const uint64_t x = v->get<uint64_t>();
      if (x > static_cast<uint64_t>(std::numeric_limits<T>::max())) {
        Error(name, "is too large");
        return;
      }
      if (min > 0 && x < static_cast<uint64_t>(min)) {
        Error(name, StrCat("must be an integer >= ", min));
        return;
      }
      *out = static_cast<T>(x);
      return;
    }
    const int64_t x = v->get<int64_t>();
    if (x < min) {
      Error(name, StrCat("must be an integer >= ", min));
      return;
    }
    *out = static_cast<T>(x);
  }

  void Number(const json* obj, const std::string& prefix, const char* key,
              double* out, std::function<bool(double)> ok,
              std::string_view constraint) {
    const json* v = Find(obj, key);
    if (v == nullptr) return;
    if (!v->is_number() || !ok(v->get<double>())) {
      Error(Join(prefix, key), std::string(constraint));
      return;
    }
    *out = v->get<double>();
  }

  void Bool(const json* obj, const std::string& prefix, const char* key,
            bool* out) {
    const json* v = Find(obj, key);
    if (v == nullptr) return;
    if (!v->is_boolean()) {
      Error(Join(prefix, key), "must be true or false");
      return;
    }
    *out = v->get<bool>();
  }

  std::optional<std::string> String(const json* obj, const std::string& prefix,
                                    const char* key, bool required) {
    const json* v = Find(obj, key);
    if (v == nullptr) {
      if (required) Error(Join(prefix, key), "is required");
      return std::nullopt;
    }
    if (!v->is_string() || v->get<std::string>().empty()) {
      Error(Join(prefix, key), "must be a non-empty string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  // Resolves against the config directory and checks existence.
  std::optional<fs::path> Path(const json* obj, const std::string& prefix,
                               const char* key, bool required,
                               bool must_exist = true) {
    auto s = String(obj, prefix, key, required);
    if (!s) return std::nullopt;
    fs::path p = base_dir_ / *s;
    if (must_exist && !fs::exists(p)) {
      Error(Join(prefix, key), StrCat("file not found: ", p.string()));
      return std::nullopt;
    }
    return p.lexically_normal();
  }

 private:
  static std::string Join(const std::string& prefix, const char* key) {
    return prefix.empty() ? std::string(key) : StrCat(prefix, ".", key);
  }
  static const json* Find(const json* obj, const char* key) {
    if (obj == nullptr) return nullptr;
    auto it = obj->find(key);
    if (it == obj->end() || it->is_null()) return nullptr;
    return &*it;
  }

  fs::path base_dir_;
  std::vector<ConfigError>* errors_;
};

}  // namespace

absl::StatusOr<ConfigCheck> ValidateConfigText(std::string_view text,
                                               const fs::path& base_dir) {
  json root = json::parse(text, nullptr, false);
  if (root.is_discarded()) {
    return absl::InvalidArgumentError("config is not valid JSON");
  }
  if (!root.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  ConfigCheck check;
  PipelineConfig& c = check.config;
  c.base_dir = base_dir;
  c.canonical_json = root.dump();
  ConfigReader r(base_dir, &check.errors);
  r.CheckKeys(root, "",
              {"corpus", "store", "seed_lexicon", "candidates", "phrases",
               "linkage", "cluster", "expand", "topics", "tagging",
               "analytics", "pattern_names", "workers"});

  const json* corpus = r.Section(root, "", "corpus", {"name", "path"});
  if (corpus == nullptr && !root.contains("corpus")) {
    r.Error("corpus", "is required");
  }
  if (corpus != nullptr) {
    if (auto name = r.String(corpus, "corpus", "name", true)) {
      if (name->find_first_of("/\\") != std::string::npos || *name == "." ||
          *name == "..") {
        r.Error("corpus.name", "must be a plain directory name");
      } else {
        c.corpus_name = *name;
      }
    }
    if (auto p = r.Path(corpus, "corpus", "path", true)) c.corpus_path = *p;
  }
  c.store = base_dir / "store";
  if (auto p = r.Path(&root, "", "store", false, false)) c.store = *p;
  if (auto p = r.Path(&root, "", "seed_lexicon", true)) c.seeds = *p;

  if (auto it = root.find("candidates"); it != root.end() && !it->is_null()) {
    if (!it->is_array()) {
      r.Error("candidates", "must be an array of {path, tag}");
    } else {
      std::set<std::string> tags;
      for (size_t i = 0; i < it->size(); ++i) {
        const std::string prefix = StrCat("candidates[", i, "]");
        const json& entry = (*it)[i];
        if (!entry.is_object()) {
          r.Error(prefix, "must be an object with path and tag");
          continue;
        }
        r.CheckKeys(entry, prefix, {"path", "tag"});
        CandidateSource source;
        auto path = r.Path(&entry, prefix, "path", true);
        auto tag = r.String(&entry, prefix, "tag", true);
        if (tag) {
          auto parsed = ParseProvenance(*tag);
          if (!parsed.ok() || *parsed == Provenance::kSeed ||
              *parsed == Provenance::kBigram) {
            r.Error(prefix + ".tag", "must be 'cogproc' or 'external'");
            tag.reset();
          } else if (!tags.insert(*tag).second) {
            r.Error(prefix + ".tag", "duplicates an earlier candidate tag");
            tag.reset();
          } else {
            source.tag = *parsed;
          }
        }
        if (path && tag) {
          source.path = *path;
          c.candidates.push_back(source);
        }
      }
    }
  }

  const json* phrases =
      r.Section(root, "", "phrases", {"min_count", "threshold", "posts_only"});
  r.Int(phrases, "phrases", "min_count", 1, &c.phrases.min_count);
  r.Number(phrases, "phrases", "threshold", &c.phrases.threshold,
           [](double x) { return std::isfinite(x); }, "must be a number");
  r.Bool(phrases, "phrases", "posts_only", &c.phrases.posts_only);

  const json* linkage = r.Section(root, "", "linkage", {"min_df", "posts_only"});
  r.Int(linkage, "linkage", "min_df", 1, &c.linkage.min_df);
  r.Bool(linkage, "linkage", "posts_only", &c.linkage.posts_only);

  const json* cluster = r.Section(root, "", "cluster", {"seed", "resolution", "restarts"});
  r.Int(cluster, "cluster", "seed", 0, &c.cluster.seed, /*required=*/true);
  r.Number(cluster, "cluster", "resolution", &c.cluster.resolution,
           [](double x) { return x > 0 && std::isfinite(x); },
           "must be a positive number");

  r.Int(cluster, "cluster", "restarts", 1, &c.cluster.restarts);

  const json* expand = r.Section(root, "", "expand", {"freeze_counts"});
  r.Bool(expand, "expand", "freeze_counts", &c.freeze_counts);

  const json* topics = r.Section(
      root, "", "topics",
      {"n_topics", "alpha", "beta", "iterations", "seed", "min_df", "pronouns",
       "markers", "meta_threshold"});
  r.Int(topics, "topics", "n_topics", 1, &c.topics.n_topics);
  double alpha = -1.0;
  r.Number(topics, "topics", "alpha", &alpha,
           [](double x) { return x > 0 && std::isfinite(x); },
           "must be a positive number");
  if (alpha > 0) c.topics.alpha = alpha;
  r.Number(topics, "topics", "beta", &c.topics.beta,
           [](double x) { return x > 0 && std::isfinite(x); },
           "must be a positive number");
  r.Int(topics, "topics", "iterations", 1, &c.topics.iterations);
  r.Int(topics, "topics", "seed", 0, &c.topics.seed, /*required=*/true);
  r.Int(topics, "topics", "min_df", 1, &c.topics.min_df);
  c.topics.pronouns = r.Path(topics, "topics", "pronouns", false);
  c.topics.markers = r.Path(topics, "topics", "markers", false);
  r.Number(topics, "topics", "meta_threshold", &c.topics.meta_threshold,
           [](double x) { return x >= 0 && x <= 1; },
           "must be a number in [0, 1]");

  const json* tagging = r.Section(root, "", "tagging", {"frequency_mode"});
  if (auto mode = r.String(tagging, "tagging", "frequency_mode", false)) {
    if (*mode == "hit_share") {
      c.frequency_mode = FrequencyMode::kHitShare;
    } else if (*mode == "dominant_share") {
      c.frequency_mode = FrequencyMode::kDominantShare;
    } else {
      r.Error("tagging.frequency_mode", "must be 'hit_share' or 'dominant_share'");
    }
  }

  const json* analytics = r.Section(
      root, "", "analytics", {"min_comments", "permutations", "seed", "n_floor"});
  r.Int(analytics, "analytics", "min_comments", 1, &c.analytics.min_comments);
  r.Int(analytics, "analytics", "permutations", 1000, &c.analytics.permutations);
  r.Int(analytics, "analytics", "seed", 0, &c.analytics.seed, /*required=*/true);
  r.Int(analytics, "analytics", "n_floor", 0, &c.analytics.n_floor);

  // Seeds must be explicit, so the sections holding them are required.
  if (cluster == nullptr && !root.contains("cluster")) r.Error("cluster.seed", "is required");
  if (topics == nullptr && !root.contains("topics")) r.Error("topics.seed", "is required");
  if (analytics == nullptr && !root.contains("analytics")) {
    r.Error("analytics.seed", "is required");
  }

  if (auto it = root.find("pattern_names"); it != root.end() && !it->is_null()) {
    if (!it->is_object()) {
      r.Error("pattern_names", "must map pattern numbers to names");
    } else {
      for (const auto& [key, value] : it->items()) {
        auto id = ParseInt<int>(key);
        if (!id || *id < 1 || !value.is_string()) {
          r.Error(StrCat("pattern_names.", key),
                  "keys must be pattern numbers from 1, values strings");
          continue;
        }
        c.pattern_names[*id - 1] = value.get<std::string>();
      }
    }
  }
  r.Int(&root, "", "workers", 1, &c.workers);
  return check;
}

absl::StatusOr<ConfigCheck> ValidateConfig(const fs::path& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  auto check = ValidateConfigText(*text, path.parent_path().empty()
                                             ? fs::path(".")
                                             : path.parent_path());
  if (!check.ok()) return Annotate(check.status(), path.string());
  return check;
}

// ---------------------------------------------------------------------------
// Run manifest.

std::string RunManifest::ToJson() const {
  ordered_json j;
  j["toolkit_version"] = toolkit_version;
  j["config_sha256"] = config_sha256;
  j["stages"] = ordered_json::array();
  for (const StageRecord& s : stages) {
    ordered_json stage;
    stage["name"] = s.name;
    stage["input_sha256"] = s.input_sha256;
    stage["outputs"] = ordered_json::object();
    for (const auto& [file, sha] : s.outputs) stage["outputs"][file] = sha;
    j["stages"].push_back(std::move(stage));
  }
  return j.dump(2) + "\n";
}

absl::StatusOr<RunManifest> RunManifest::FromJson(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::DataLossError("run manifest is not valid JSON");
  }
  RunManifest m;
  try {
    m.toolkit_version = j.at("toolkit_version").get<std::string>();
    m.config_sha256 = j.at("config_sha256").get<std::string>();
    for (const json& s : j.at("stages")) {
      StageRecord record;
      record.name = s.at("name").get<std::string>();
      record.input_sha256 = s.at("input_sha256").get<std::string>();
      for (const auto& [file, sha] : s.at("outputs").items()) {
        record.outputs[file] = sha.get<std::string>();
      }
      m.stages.push_back(std::move(record));
    }
  } catch (const json::exception& e) {
    return absl::DataLossError(StrCat("run manifest: ", e.what()));
  }
  return m;
}

const StageRecord* RunManifest::Find(std::string_view stage) const {
  for (const StageRecord& s : stages) {
    if (s.name == stage) return &s;
  }
  return nullptr;
}

namespace {

struct StageSpec {
  std::string name;
  ordered_json params;
  std::vector<fs::path> inputs;      // Absolute.
  std::vector<std::string> outputs;  // Relative to the workdir.
  std::function<absl::Status()> run;
};

std::string Label(const fs::path& path, const PipelineConfig& config) {
  const fs::path work = config.workdir();
  auto rel = path.lexically_relative(work);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  rel = path.lexically_relative(config.base_dir);
  if (!rel.empty()) return StrCat("config:", rel.generic_string());
  return path.generic_string();
}

absl::StatusOr<std::string> Fingerprint(const StageSpec& stage,
                                        const PipelineConfig& config) {
  ordered_json j;
  j["stage"] = stage.name;
  j["version"] = std::string(ToolkitVersion());
  j["params"] = stage.params;
  j["inputs"] = ordered_json::array();
  for (const fs::path& input : stage.inputs) {
    std::string sha = "absent";
    if (fs::exists(input)) {
      auto h = Sha256File(input);
      if (!h.ok()) return h.status();
      sha = *h;
    }
    j["inputs"].push_back({{"file", Label(input, config)}, {"sha256", sha}});
  }
  return Sha256Hex(j.dump());
}

bool OutputsMatch(const StageRecord& record, const fs::path& dir) {
  for (const auto& [file, sha] : record.outputs) {
    const fs::path p = dir / file;
    if (!fs::exists(p)) return false;
    auto h = Sha256File(p);
    if (!h.ok() || *h != sha) return false;
  }
  return true;
}

ordered_json NamesJson(const NameMap& names) {
  ordered_json j = ordered_json::object();
  for (const auto& [id, name] : names) j[std::to_string(id + 1)] = name;
  return j;
}

}  // namespace

absl::StatusOr<PipelineRun> RunPipeline(const PipelineConfig& config,
                                        bool force) {
  const fs::path dir = config.workdir();
  const int workers = config.workers;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::InternalError(
        StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }

  RunManifest previous;
  if (fs::exists(dir / files::kRunManifest)) {
    auto text = ReadFile(dir / files::kRunManifest);
    if (text.ok()) {
      auto parsed = RunManifest::FromJson(*text);
      if (parsed.ok()) previous = *std::move(parsed);
    }
  }

  auto in = [&](std::string_view f) { return dir / f; };
  const fs::path docs = in(kDocumentsFile);
  const fs::path model_json = in(files::kTopicModel);
  fs::path model_bin = model_json;
  model_bin.replace_extension(".bin");

  std::vector<StageSpec> stages;
  stages.push_back(
      {"ingest",
       {{"name", config.corpus_name}},
       {config.corpus_path},
       {kDocumentsFile, kManifestFile},
       [&] {
         auto r = StageIngest(config.corpus_path, dir, config.corpus_name);
         return r.ok() ? absl::OkStatus() : r.status();
       }});
  stages.push_back({"phrases",
                    {{"min_count", config.phrases.min_count},
                     {"threshold", FormatDouble(config.phrases.threshold)},
                     {"posts_only", config.phrases.posts_only}},
                    {docs, config.seeds},
                    {files::kFragments},
                    [&] {
                      return StagePhrases(dir, config.seeds, config.phrases,
                                          workers);
                    }});
  stages.push_back({"linkage",
                    {{"min_df", config.linkage.min_df},
                     {"posts_only", config.linkage.posts_only}},
                    {docs, in(files::kFragments)},
                    {files::kCounts, files::kNetwork, files::kNetworkNodes},
                    [&] { return StageLinkage(dir, config.linkage, workers); }});
  stages.push_back(
      {"cluster",
       {{"seed", std::to_string(config.cluster.seed)},
        {"resolution", FormatDouble(config.cluster.resolution)},
        {"restarts", config.cluster.restarts}},
       {in(files::kNetwork), in(files::kNetworkNodes)},
       {files::kClusteredLexicon},
       [&] {
         return StageCluster(dir, config.cluster, files::kClusteredLexicon);
       }});
  std::string lexicon = files::kClusteredLexicon;
  for (const CandidateSource& source : config.candidates) {
    const std::string tag(ProvenanceName(source.tag));
    const std::string out = StrCat("lexicon_", tag, ".json");
    const std::string prior = lexicon;
    stages.push_back(
        {StrCat("expand:", tag),
         {{"tag", tag},
          {"freeze_counts", config.freeze_counts},
          {"posts_only", config.linkage.posts_only}},
         {docs, in(files::kFragments), in(prior), source.path},
         {out, StrCat("admissions_", tag, ".csv")},
         [&, source, prior, out] {
           return StageExpand(dir, source, config.linkage,
                              config.freeze_counts, prior, out, workers);
         }});
    lexicon = out;
  }
  stages.push_back({"lexicon",
                    ordered_json::object(),
                    {in(lexicon)},
                    {files::kLexiconJson, files::kLexiconCsv},
                    [&, lexicon] { return StagePublishLexicon(dir, lexicon); }});

  ordered_json topic_params = {
      {"n_topics", config.topics.n_topics},
      {"alpha", config.topics.alpha ? FormatDouble(*config.topics.alpha)
                                    : std::string("default")},
      {"beta", FormatDouble(config.topics.beta)},
      {"iterations", config.topics.iterations},
      {"seed", std::to_string(config.topics.seed)},
      {"min_df", config.topics.min_df}};
  std::vector<fs::path> topic_inputs = {docs, in(files::kLexiconJson)};
  if (config.topics.pronouns) topic_inputs.push_back(*config.topics.pronouns);
  stages.push_back({"topics",
                    topic_params,
                    topic_inputs,
                    {files::kTopicModel, "topic_model.bin", files::kDocTopics},
                    [&] { return StageTopics(dir, config.topics, workers); }});

  std::vector<fs::path> meta_inputs = {docs, model_json, model_bin,
                                       in(files::kDocTopics)};
  if (config.topics.markers) meta_inputs.push_back(*config.topics.markers);
  stages.push_back(
      {"flag_meta",
       {{"threshold", FormatDouble(config.topics.meta_threshold)}},
       meta_inputs,
       {files::kMetaTopics, kExclusionsFile},
       [&]() -> absl::Status {
         std::vector<std::string> markers;
         if (config.topics.markers) {
           auto text = ReadFile(*config.topics.markers);
           if (!text.ok()) return text.status();
           markers = ParseWordList(*text);
         }
         return StageFlagMeta(dir, markers, config.topics.meta_threshold);
       }});
  stages.push_back({"tag",
                    ordered_json::object(),
                    {docs, in(files::kLexiconJson)},
                    {files::kTags},
                    [&] { return StageTag(dir, files::kLexiconJson, workers); }});

  const std::string reports = files::kReports;
  stages.push_back(
      {"report_frequencies",
       {{"mode", config.frequency_mode == FrequencyMode::kHitShare
                     ? "hit_share"
                     : "dominant_share"},
        {"names", NamesJson(config.pattern_names)}},
       {docs, in(kExclusionsFile), in(files::kTags)},
       {reports + "/frequencies.csv", reports + "/frequencies.json"},
       [&] {
         return StageReportFrequencies(dir, config.frequency_mode,
                                       config.pattern_names);
       }});
  const ordered_json analytics_params = {
      {"min_comments", config.analytics.min_comments},
      {"permutations", config.analytics.permutations},
      {"seed", std::to_string(config.analytics.seed)},
      {"n_floor", config.analytics.n_floor},
      {"names", NamesJson(config.pattern_names)}};
  for (Outcome outcome : {Outcome::kDelta, Outcome::kScore}) {
    const std::string o(OutcomeName(outcome));
    stages.push_back(
        {StrCat("report_", o),
         analytics_params,
         {docs, in(kExclusionsFile), in(files::kTags), in(files::kDocTopics),
          model_json, model_bin},
         {StrCat(reports, "/efficacy_", o, ".csv"),
          StrCat(reports, "/efficacy_", o, "_long.csv"),
          StrCat(reports, "/efficacy_", o, ".json")},
         [&, outcome] {
           return StageReportEfficacy(dir, outcome, config.analytics,
                                      config.pattern_names, workers);
         }});
  }
  stages.push_back(
      {"report_profiles",
       analytics_params,
       {docs, in(kExclusionsFile), in(files::kTags)},
       {reports + "/profiles.csv", reports + "/factors.csv",
        reports + "/factors.json", reports + "/quadrants.csv",
        reports + "/quadrants.json"},
       [&] {
         return StageReportProfiles(dir, config.analytics,
                                    config.pattern_names);
       }});

  PipelineRun run;
  RunManifest& manifest = run.manifest;
  manifest.toolkit_version = std::string(ToolkitVersion());
  manifest.config_sha256 = Sha256Hex(config.canonical_json);
  ordered_json timings = ordered_json::array();

  for (const StageSpec& stage : stages) {
    auto fingerprint = Fingerprint(stage, config);
    if (!fingerprint.ok()) {
      return Annotate(fingerprint.status(), StrCat("stage '", stage.name, "'"));
    }
    const StageRecord* prior = previous.Find(stage.name);
    const auto start = std::chrono::steady_clock::now();
    bool skipped = false;
    if (!force && prior != nullptr && prior->input_sha256 == *fingerprint &&
        OutputsMatch(*prior, dir)) {
      manifest.stages.push_back(*prior);
      run.skipped.push_back(stage.name);
      skipped = true;
      Log(StrCat("[", stage.name, "] unchanged, skipped"));
    } else {
      Log(StrCat("[", stage.name, "] running"));
      if (auto s = stage.run(); !s.ok()) {
        return Annotate(s, StrCat("stage '", stage.name, "'"));
      }
      StageRecord record;
      record.name = stage.name;
      record.input_sha256 = *fingerprint;
      for (const std::string& out : stage.outputs) {
        auto h = Sha256File(dir / out);
        if (!h.ok()) {
          return Annotate(h.status(), StrCat("stage '", stage.name, "'"));
        }
        record.outputs[out] = *h;
      }
      manifest.stages.push_back(std::move(record));
      run.executed.push_back(stage.name);
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    timings.push_back(
        {{"stage", stage.name}, {"skipped", skipped}, {"seconds", seconds}});
    // Checkpoint: later stages rerun from here after a failure.
    RunManifest checkpoint = manifest;
    for (const StageRecord& s : previous.stages) {
      if (checkpoint.Find(s.name) == nullptr) checkpoint.stages.push_back(s);
    }
    if (auto s = WriteFile(dir / files::kRunManifest, checkpoint.ToJson());
        !s.ok()) {
      return s;
    }
  }
  if (auto s = WriteFile(dir / files::kRunManifest, manifest.ToJson());
      !s.ok()) {
    return s;
  }
  ordered_json t;
  t["finished_at"] = static_cast<int64_t>(std::time(nullptr));
  t["stages"] = std::move(timings);
  if (auto s = WriteFile(dir / files::kRunTimings, t.dump(2) + "\n"); !s.ok()) {
    return s;
  }
  return run;
}

}  // namespace argpat
