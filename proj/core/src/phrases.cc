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

#include <algorithm>
#include <map>
#include <set>

#include "argpat/hash.h"
#include "argpat/parallel.h"
#include "argpat/text.h"

namespace argpat {
namespace {

struct PairHash {
  size_t operator()(const std::pair<std::string, std::string>& p) const {
    const size_t h = std::hash<std::string>{}(p.first);
    return h ^ (std::hash<std::string>{}(p.second) + 0x9e3779b97f4a7c15ULL +
                (h << 6) + (h >> 2));
  }
};

using UnigramCounts = StringMap<uint64_t>;
using PairCounts =
    std::unordered_map<std::pair<std::string, std::string>, uint64_t, PairHash>;

}  // namespace

std::vector<std::string> SeedLexicon::Words() const {
  std::set<std::string> words;
  for (const auto& category : categories) {
    words.insert(category.words.begin(), category.words.end());
  }
  return {words.begin(), words.end()};
}

absl::StatusOr<SeedLexiconParse> ParseSeedLexicon(std::string_view text) {
  SeedLexiconParse out;
  size_t line_no = 0;
  std::set<std::string> in_category;
  for (std::string_view raw : Split(text, '\n')) {
    ++line_no;
    std::string_view line = Trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string name(Trim(line.substr(1)));
      if (name.empty()) {
        return absl::InvalidArgumentError(
            StrCat("line ", line_no, ": empty category name"));
      }
      out.lexicon.categories.push_back({std::move(name), {}});
      in_category.clear();
      continue;
    }
    if (out.lexicon.categories.empty()) {
      return absl::InvalidArgumentError(StrCat(
          "line ", line_no, ": word '", line, "' appears before any #category"));
    }
    if (line.find_first_of(" \t") != std::string_view::npos) {
      return absl::InvalidArgumentError(StrCat(
          "line ", line_no, ": seed word '", line, "' contains whitespace"));
    }
    std::string word = ToLowerAscii(line);
    auto& category = out.lexicon.categories.back();
    if (!in_category.insert(word).second) {
      return absl::InvalidArgumentError(
          StrCat("duplicate word '", word, "' in category '",
                       category.name, "'"));
    }
    category.words.push_back(std::move(word));
  }
  if (out.lexicon.categories.empty()) {
    return absl::InvalidArgumentError("seed lexicon is empty");
  }
  for (const auto& category : out.lexicon.categories) {
    if (category.words.empty()) {
      out.warnings.push_back(
          StrCat("category '", category.name, "' has no words"));
    }
  }
  return out;
}

absl::StatusOr<SeedLexiconParse> LoadSeedLexicon(
    const std::filesystem::path& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseSeedLexicon(*text);
}

std::string_view ArityName(Arity arity) {
  return arity == Arity::kUnigram ? "unigram" : "bigram";
}

absl::StatusOr<Fragment> Fragment::Parse(std::string_view text) {
  text = Trim(text);
  if (text.empty()) return absl::InvalidArgumentError("empty fragment");
  const size_t space = text.find(' ');
  const size_t spaces = static_cast<size_t>(std::count(text.begin(), text.end(), ' '));
  if (spaces > 1 || text.find_first_of("\t_") != std::string_view::npos ||
      space == 0 || space + 1 == text.size()) {
    return absl::InvalidArgumentError(
        StrCat("'", text, "' is not a unigram or bigram"));
  }
  Fragment f;
  f.text = ToLowerAscii(text);
  f.arity = spaces == 0 ? Arity::kUnigram : Arity::kBigram;
  return f;
}

Fragment Fragment::FromToken(std::string_view token) {
  Fragment f;
  f.text = std::string(token);
  const size_t underscore = f.text.find('_');
  if (underscore != std::string::npos) {
    f.text[underscore] = ' ';
    f.arity = Arity::kBigram;
  }
  return f;
}

std::string Fragment::Token() const {
  std::string token = text;
  std::replace(token.begin(), token.end(), ' ', '_');
  return token;
}

PhraseScoreTable ScorePhrases(std::span<const std::vector<std::string>> docs,
                              const SeedLexicon& seeds,
                              const PhraseOptions& options) {
  const std::vector<std::string> seed_words = seeds.Words();
  const StringSet seed_set(seed_words.begin(),
                                                  seed_words.end());

  const int workers = std::max(options.workers, 1);
  std::vector<UnigramCounts> unigram_parts(static_cast<size_t>(workers));
  std::vector<PairCounts> pair_parts(static_cast<size_t>(workers));
  std::vector<uint64_t> token_parts(static_cast<size_t>(workers), 0);
  ParallelChunks(docs.size(), workers,
                 [&](size_t chunk, size_t begin, size_t end) {
                   auto& unigrams = unigram_parts[chunk];
                   auto& pairs = pair_parts[chunk];
                   for (size_t d = begin; d < end; ++d) {
                     const auto& tokens = docs[d];
                     token_parts[chunk] += tokens.size();
                     for (size_t i = 0; i < tokens.size(); ++i) {
                       ++unigrams[tokens[i]];
                       if (i + 1 < tokens.size() &&
                           (seed_set.contains(tokens[i]) ||
                            seed_set.contains(tokens[i + 1]))) {
                         ++pairs[{tokens[i], tokens[i + 1]}];
                       }
                     }
                   }
                 });

  // Integer merges are order-independent.
  UnigramCounts unigrams = std::move(unigram_parts[0]);
  PairCounts pairs = std::move(pair_parts[0]);
  uint64_t total_tokens = token_parts[0];
  for (size_t c = 1; c < unigram_parts.size(); ++c) {
    for (auto& [word, n] : unigram_parts[c]) unigrams[word] += n;
    for (auto& [pair, n] : pair_parts[c]) pairs[pair] += n;
    total_tokens += token_parts[c];
  }

  PhraseScoreTable table;
  table.total_tokens = total_tokens;
  table.entries.reserve(pairs.size());
  const double min_count = static_cast<double>(options.min_count);
  for (const auto& [pair, count] : pairs) {
    const double a = static_cast<double>(unigrams.at(pair.first));
    const double b = static_cast<double>(unigrams.at(pair.second));
    const double score = (static_cast<double>(count) - min_count) *
                         static_cast<double>(total_tokens) / (a * b);
    table.entries.push_back({pair, {count, score}});
  }
  std::sort(table.entries.begin(), table.entries.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return table;
}

std::vector<ScoredBigram> DetectBigrams(
    std::span<const std::vector<std::string>> docs, const SeedLexicon& seeds,
    const PhraseOptions& options) {
  const PhraseScoreTable table = ScorePhrases(docs, seeds, options);
  std::vector<ScoredBigram> out;
  for (const auto& [pair, entry] : table.entries) {
    if (entry.pair_count < options.min_count) continue;
    if (!(entry.score > options.threshold)) continue;
    Fragment f;
    f.text = StrCat(pair.first, " ", pair.second);
    f.arity = Arity::kBigram;
    out.push_back({std::move(f), entry.pair_count, entry.score});
  }
  std::sort(out.begin(), out.end(),
            [](const ScoredBigram& a, const ScoredBigram& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.fragment.text < b.fragment.text;
            });
  return out;
}

BigramSet::BigramSet(std::span<const Fragment> fragments) {
  for (const Fragment& f : fragments) {
    if (f.arity != Arity::kBigram) continue;
    const size_t space = f.text.find(' ');
    if (next_[f.text.substr(0, space)].insert(f.text.substr(space + 1)).second) {
      ++size_;
    }
  }
}

bool BigramSet::Contains(std::string_view first,
                         std::string_view second) const {
  auto it = next_.find(first);
  return it != next_.end() && it->second.contains(second);
}

std::vector<std::string> MergePhrases(std::span<const std::string> tokens,
                                      const BigramSet& bigrams) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  size_t i = 0;
  while (i < tokens.size()) {
    if (i + 1 < tokens.size() && bigrams.Contains(tokens[i], tokens[i + 1])) {
      out.push_back(StrCat(tokens[i], "_", tokens[i + 1]));
      i += 2;
    } else {
      out.push_back(tokens[i]);
      ++i;
    }
  }
  return out;
}

std::vector<Fragment> FragmentInventory::Fragments() const {
  std::vector<Fragment> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.fragment);
  return out;
}

FragmentInventory BuildInventory(
    std::span<const std::vector<std::string>> docs, const SeedLexicon& seeds,
    std::span<const ScoredBigram> bigrams) {
  const std::vector<std::string> words = seeds.Words();
  StringMap<uint64_t> counts;
  for (const auto& w : words) counts[w] = 0;
  for (const auto& tokens : docs) {
    for (const auto& t : tokens) {
      if (auto it = counts.find(t); it != counts.end()) ++it->second;
    }
  }
  FragmentInventory inventory;
  for (const auto& w : words) {
    inventory.entries.push_back(
        {Fragment{w, Arity::kUnigram}, counts[w], std::nullopt});
  }
  for (const auto& b : bigrams) {
    inventory.entries.push_back({b.fragment, b.pair_count, b.score});
  }
  return inventory;
}

std::string InventoryToTsv(const FragmentInventory& inventory) {
  std::string out = "text\tarity\tcount\tscore\n";
  for (const auto& e : inventory.entries) {
    StrAppend(&out, e.fragment.text, "\t", ArityName(e.fragment.arity),
                    "\t", e.count, "\t",
                    e.score ? FormatDouble(*e.score) : std::string("-"), "\n");
  }
  return out;
}

absl::StatusOr<FragmentInventory> ParseInventoryTsv(std::string_view text) {
  FragmentInventory inventory;
  bool header = true;
  for (std::string_view line : Split(text, '\n', true)) {
    if (header) {
      header = false;
      if (line.starts_with("text\t")) continue;
    }
    std::vector<std::string_view> fields = Split(line, '\t');
    if (fields.size() != 4) {
      return absl::DataLossError(StrCat("bad inventory line: ", line));
    }
    auto fragment = Fragment::Parse(fields[0]);
    if (!fragment.ok()) return fragment.status();
    if (ArityName(fragment->arity) != fields[1]) {
      return absl::DataLossError(StrCat("arity mismatch: ", line));
    }
    auto count = ParseInt<uint64_t>(fields[2]);
    if (!count) return absl::DataLossError(StrCat("bad count: ", line));
    InventoryEntry entry{*std::move(fragment), *count, std::nullopt};
    if (fields[3] != "-") {
      auto score = ParseDouble(fields[3]);
      if (!score) return absl::DataLossError(StrCat("bad score: ", line));
      entry.score = *score;
    }
    inventory.entries.push_back(std::move(entry));
  }
  return inventory;
}

absl::StatusOr<std::vector<Fragment>> ParseFragmentList(std::string_view text) {
  std::vector<Fragment> out;
  std::set<std::string> seen;
  for (std::string_view line : Split(text, '\n')) {
    line = Trim(line);
    if (line.empty()) continue;
    auto f = Fragment::Parse(line);
    if (!f.ok()) return f.status();
    if (seen.insert(f->text).second) out.push_back(*std::move(f));
  }
  return out;
}

}  // namespace argpat
