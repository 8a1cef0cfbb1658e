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

#ifndef ARGPAT_HASH_H_
#define ARGPAT_HASH_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace argpat {

// Lowercase hex SHA-256 digest.
std::string Sha256Hex(std::string_view data);

absl::StatusOr<std::string> Sha256File(const std::filesystem::path& path);

// Whole-file helpers shared by the store and the pipeline.
absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);
absl::Status WriteFile(const std::filesystem::path& path,
                       std::string_view contents);

}  // namespace argpat

#endif  // ARGPAT_HASH_H_
