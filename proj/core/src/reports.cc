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

#include "argpat/reports.h"

#include <cmath>

#include <fmt/format.h>

#include "argpat/text.h"
#include "json.hpp"

namespace argpat {
namespace {

using nlohmann::ordered_json;

std::string TopicKey(const std::optional<int>& topic) {
  return topic ? std::to_string(*topic) : std::string("ALL");
}

std::string TopicLabel(const std::optional<int>& topic,
                       const NameMap& labels) {
  if (!topic) return "all";
  auto it = labels.find(*topic);
  return it == labels.end() ? std::string() : it->second;
}

ordered_json Number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string Cell(const EfficacyRow& row, Outcome outcome) {
  if (row.suppressed) return "";
  if (!row.defined) return "nan";
  const std::string value = outcome == Outcome::kDelta
                                ? fmt::format("{:+.1f}%", row.bonus)
                                : fmt::format("{:+.2f}", row.bonus);
  return StrCat(value, Stars(row.p_value));
}

}  // namespace

std::string PatternName(int pattern, const NameMap& names) {
  auto it = names.find(pattern);
  if (it != names.end()) return it->second;
  return StrCat("P", pattern + 1);
}

std::string FrequenciesToCsv(std::span<const double> frequencies,
                             const NameMap& names) {
  std::string out = "pattern,name,frequency\n";
  for (size_t p = 0; p < frequencies.size(); ++p) {
    const int id = static_cast<int>(p);
    StrAppend(&out, id + 1, ",", CsvEscape(PatternName(id, names)), ",",
              FormatDouble(frequencies[p]), "\n");
  }
  return out;
}

std::string FrequenciesToJson(std::span<const double> frequencies,
                              const NameMap& names, FrequencyMode mode) {
  ordered_json j;
  j["mode"] = mode == FrequencyMode::kHitShare ? "hit_share" : "dominant_share";
  j["patterns"] = ordered_json::array();
  for (size_t p = 0; p < frequencies.size(); ++p) {
    const int id = static_cast<int>(p);
    j["patterns"].push_back({{"pattern", id + 1},
                             {"name", PatternName(id, names)},
                             {"frequency", frequencies[p]}});
  }
  return j.dump(2) + "\n";
}

std::string EfficacyLongCsv(std::span<const EfficacyRow> rows, Outcome outcome,
                            const NameMap& names,
                            const NameMap& topic_labels) {
  std::string out =
      "outcome,topic,topic_label,pattern,pattern_name,n_comments,n_topic,"
      "baseline,mean,bonus,p_value,stars,suppressed\n";
  for (const EfficacyRow& r : rows) {
    StrAppend(&out, OutcomeName(outcome), ",", TopicKey(r.topic), ",",
              CsvEscape(TopicLabel(r.topic, topic_labels)), ",", r.pattern + 1,
              ",", CsvEscape(PatternName(r.pattern, names)), ",", r.n_comments,
              ",", r.n_topic, ",", FormatDouble(r.baseline), ",",
              FormatDouble(r.mean), ",", FormatDouble(r.bonus), ",",
              r.p_value ? FormatDouble(*r.p_value) : std::string(), ",",
              Stars(r.p_value), ",", r.suppressed ? 1 : 0, "\n");
  }
  return out;
}

std::string EfficacyTableCsv(std::span<const EfficacyRow> rows,
                             Outcome outcome, int n_patterns,
                             const NameMap& names,
                             const NameMap& topic_labels) {
  std::string out = StrCat("topic,topic_label,n_comments,",
                           outcome == Outcome::kDelta ? "p_delta" : "mean_score");
  for (int p = 0; p < n_patterns; ++p) {
    StrAppend(&out, ",", CsvEscape(PatternName(p, names)));
  }
  out += '\n';
  size_t i = 0;
  while (i < rows.size()) {
    const std::optional<int> topic = rows[i].topic;
    std::vector<std::string> cells(static_cast<size_t>(n_patterns));
    const EfficacyRow& first = rows[i];
    for (; i < rows.size() && rows[i].topic == topic; ++i) {
      if (rows[i].pattern < n_patterns) {
        cells[static_cast<size_t>(rows[i].pattern)] = Cell(rows[i], outcome);
      }
    }
    const std::string baseline =
        outcome == Outcome::kDelta
            ? fmt::format("{:.2f}%", 100.0 * first.baseline)
            : fmt::format("{:.2f}", first.baseline);
    StrAppend(&out, TopicKey(topic), ",",
              CsvEscape(TopicLabel(topic, topic_labels)), ",", first.n_topic,
              ",", baseline);
    for (const std::string& c : cells) StrAppend(&out, ",", c);
    out += '\n';
  }
  return out;
}

std::string EfficacyToJson(std::span<const EfficacyRow> rows, Outcome outcome,
                           const NameMap& names,
                           const NameMap& topic_labels) {
  ordered_json j;
  j["outcome"] = std::string(OutcomeName(outcome));
  j["rows"] = ordered_json::array();
  for (const EfficacyRow& r : rows) {
    ordered_json row;
    row["topic"] = TopicKey(r.topic);
    row["topic_label"] = TopicLabel(r.topic, topic_labels);
    row["pattern"] = r.pattern + 1;
    row["pattern_name"] = PatternName(r.pattern, names);
    row["n_comments"] = r.n_comments;
    row["n_topic"] = r.n_topic;
    row["baseline"] = Number(r.baseline);
    row["mean"] = Number(r.mean);
    row["bonus"] = r.defined ? Number(r.bonus) : ordered_json(nullptr);
    row["p_value"] = r.p_value ? Number(*r.p_value) : ordered_json(nullptr);
    row["stars"] = std::string(Stars(r.p_value));
    row["suppressed"] = r.suppressed;
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::string FactorTableCsv(const PcaResult& pca, const NameMap& names) {
  std::string out = "pattern,name,pc1,pc2\n";
  for (size_t p = 0; p < pca.components[0].size(); ++p) {
    const int id = static_cast<int>(p);
    StrAppend(&out, id + 1, ",", CsvEscape(PatternName(id, names)), ",",
              FormatDouble(pca.components[0][p]), ",",
              FormatDouble(pca.components[1][p]), "\n");
  }
  StrAppend(&out, ",explained_variance,", FormatDouble(pca.explained[0]), ",",
            FormatDouble(pca.explained[1]), "\n");
  return out;
}

std::string FactorTableJson(const PcaResult& pca, const NameMap& names) {
  ordered_json j;
  j["n_profiles"] = pca.authors.size();
  j["explained_variance"] = {pca.explained[0], pca.explained[1]};
  j["loadings"] = ordered_json::array();
  for (size_t p = 0; p < pca.components[0].size(); ++p) {
    const int id = static_cast<int>(p);
    j["loadings"].push_back({{"pattern", id + 1},
                             {"name", PatternName(id, names)},
                             {"pc1", pca.components[0][p]},
                             {"pc2", pca.components[1][p]}});
  }
  return j.dump(2) + "\n";
}

std::string ProfilesCsv(std::span<const UserProfile> profiles,
                        const PcaResult* pca, const NameMap& names) {
  std::string out = "author,n_comments";
  const size_t np = profiles.empty() ? 0 : profiles[0].mean_pattern.size();
  for (size_t p = 0; p < np; ++p) {
    StrAppend(&out, ",", CsvEscape(PatternName(static_cast<int>(p), names)));
  }
  if (pca) out += ",pc1,pc2";
  out += '\n';
  for (size_t u = 0; u < profiles.size(); ++u) {
    StrAppend(&out, CsvEscape(profiles[u].author), ",", profiles[u].n_comments);
    for (double x : profiles[u].mean_pattern) StrAppend(&out, ",", FormatDouble(x));
    if (pca) {
      StrAppend(&out, ",", FormatDouble(pca->scores[u][0]), ",",
                FormatDouble(pca->scores[u][1]));
    }
    out += '\n';
  }
  return out;
}

std::string QuadrantsCsv(std::span<const QuadrantRow> rows) {
  std::string out =
      "quadrant,pc1_high,pc2_high,n_users,n_comments,delta_rate,baseline,"
      "bonus\n";
  for (const QuadrantRow& r : rows) {
    StrAppend(&out, r.Name(), ",", r.pc1_high ? 1 : 0, ",", r.pc2_high ? 1 : 0,
              ",", r.n_users, ",", r.n_comments, ",", FormatDouble(r.delta_rate),
              ",", FormatDouble(r.baseline), ",", FormatDouble(r.bonus), "\n");
  }
  return out;
}

std::string QuadrantsJson(std::span<const QuadrantRow> rows) {
  ordered_json j = ordered_json::array();
  for (const QuadrantRow& r : rows) {
    j.push_back({{"quadrant", r.Name()},
                 {"pc1_high", r.pc1_high},
                 {"pc2_high", r.pc2_high},
                 {"n_users", r.n_users},
                 {"n_comments", r.n_comments},
                 {"delta_rate", Number(r.delta_rate)},
                 {"baseline", Number(r.baseline)},
                 {"bonus", r.defined ? Number(r.bonus) : ordered_json(nullptr)}});
  }
  return j.dump(2) + "\n";
}

std::string TopicsCsv(const TopicModel& model,
                      std::span<const MetaTopic> meta, size_t top_n) {
  std::string out = "topic,label,overlap,flagged,top_words\n";
  for (int k = 0; k < model.n_topics; ++k) {
    double overlap = 0.0;
    bool flagged = false;
    for (const MetaTopic& m : meta) {
      if (m.topic == k) {
        overlap = m.overlap;
        flagged = m.flagged;
      }
    }
    std::string words;
    for (const std::string& w : model.TopWords(k, top_n)) {
      if (!words.empty()) words += ' ';
      words += w;
    }
    StrAppend(&out, k, ",", CsvEscape(model.Label(k)), ",",
              FormatDouble(overlap), ",", flagged ? 1 : 0, ",",
              CsvEscape(words), "\n");
  }
  return out;
}

}  // namespace argpat
