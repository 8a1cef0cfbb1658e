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

#ifndef ARGPAT_TOKENIZE_H_
#define ARGPAT_TOKENIZE_H_

#include <string>
#include <string_view>
#include <vector>

namespace argpat {

struct TokenStream {
  std::string doc_id;
  std::vector<std::string> tokens;
};

// Normalizes a document body into lowercase word tokens.
//
// Quoted lines (starting with ">" or "&gt;") and URLs are dropped, markdown
// and ASCII punctuation become separators, and an apostrophe survives only
// between two word characters ("don't"). Typographic apostrophes are folded
// to ASCII. Non-ASCII text such as emoji or non-Latin scripts passes through
// unchanged. Never fails; an empty body yields no tokens.
std::vector<std::string> Tokenize(std::string_view body);

}  // namespace argpat

#endif  // ARGPAT_TOKENIZE_H_
