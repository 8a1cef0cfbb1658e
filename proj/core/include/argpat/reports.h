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

#ifndef ARGPAT_REPORTS_H_
#define ARGPAT_REPORTS_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "argpat/analytics.h"
#include "argpat/tagging.h"
#include "argpat/topics.h"

namespace argpat {

using NameMap = std::map<int, std::string>;

// names[pattern] when present, otherwise "P<pattern+1>".
std::string PatternName(int pattern, const NameMap& names);

// Pattern frequency table: pattern,name,frequency.
std::string FrequenciesToCsv(std::span<const double> frequencies,
                             const NameMap& names);
std::string FrequenciesToJson(std::span<const double> frequencies,
                              const NameMap& names, FrequencyMode mode);

// One row per (topic, pattern), machine precision.
std::string EfficacyLongCsv(std::span<const EfficacyRow> rows, Outcome outcome,
                            const NameMap& names, const NameMap& topic_labels);
// Topics down, patterns across; cells carry the rounded bonus and stars.
// Suppressed and missing cells are blank.
std::string EfficacyTableCsv(std::span<const EfficacyRow> rows,
                             Outcome outcome, int n_patterns,
                             const NameMap& names, const NameMap& topic_labels);
std::string EfficacyToJson(std::span<const EfficacyRow> rows, Outcome outcome,
                           const NameMap& names, const NameMap& topic_labels);

// Loadings per pattern on the first two components plus explained variance.
std::string FactorTableCsv(const PcaResult& pca, const NameMap& names);
std::string FactorTableJson(const PcaResult& pca, const NameMap& names);

std::string ProfilesCsv(std::span<const UserProfile> profiles,
                        const PcaResult* pca, const NameMap& names);

std::string QuadrantsCsv(std::span<const QuadrantRow> rows);
std::string QuadrantsJson(std::span<const QuadrantRow> rows);

// topic,label,overlap,flagged,top_words
std::string TopicsCsv(const TopicModel& model,
                      std::span<const MetaTopic> meta, size_t top_n = 10);

}  // namespace argpat

#endif  // ARGPAT_REPORTS_H_
