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

#include "argpat/tokenize.h"

#include <array>
#include <cstdint>

namespace argpat {
namespace {

bool IsAsciiAlnum(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Length of the UTF-8 sequence starting at s[i], or 0 if invalid.
size_t Utf8Length(std::string_view s, size_t i, uint32_t* code_point) {
  const auto byte = [&](size_t k) { return static_cast<unsigned char>(s[k]); };
  const unsigned char lead = byte(i);
  size_t length;
  uint32_t cp;
  if (lead < 0x80) {
    *code_point = lead;
    return 1;
  } else if ((lead & 0xE0) == 0xC0) {
    length = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    length = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    length = 4;
    cp = lead & 0x07;
  } else {
    return 0;
  }
  if (i + length > s.size()) return 0;
  for (size_t k = 1; k < length; ++k) {
    if ((byte(i + k) & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (byte(i + k) & 0x3F);
  }
  *code_point = cp;
  return length;
}

constexpr uint32_t kRightSingleQuote = 0x2019;

// Typographic punctuation treated like ASCII punctuation.
bool IsUnicodePunct(uint32_t cp) {
  static constexpr std::array<uint32_t, 12> kPunct = {
      0x00A0, 0x00AB, 0x00BB, 0x2013, 0x2014, 0x2018,
      0x201C, 0x201D, 0x2022, 0x2026, 0x2039, 0x203A};
  for (uint32_t p : kPunct) {
    if (p == cp) return true;
  }
  return false;
}

bool StartsWithUrl(std::string_view s) {
  const auto starts_ci = [&](std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (size_t i = 0; i < prefix.size(); ++i) {
      char c = s[i];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      if (c != prefix[i]) return false;
    }
    return true;
  };
  return starts_ci("http://") || starts_ci("https://") || starts_ci("www.");
}

bool IsQuotedLine(std::string_view line) {
  size_t i = 0;
  while (i < line.size() && IsSpace(static_cast<unsigned char>(line[i]))) ++i;
  line.remove_prefix(i);
  return line.starts_with('>') || line.starts_with("&gt;");
}

// Is the code point at s[i] a word character for apostrophe purposes?
bool WordCharAt(std::string_view s, size_t i) {
  if (i >= s.size()) return false;
  uint32_t cp;
  size_t len = Utf8Length(s, i, &cp);
  if (len == 0) return false;
  if (len == 1) return IsAsciiAlnum(static_cast<unsigned char>(s[i]));
  return !IsUnicodePunct(cp) && cp != kRightSingleQuote;
}

void TokenizeLine(std::string_view line, std::vector<std::string>* out) {
  std::string current;
  const auto flush = [&] {
    if (!current.empty()) out->push_back(std::move(current));
    current.clear();
  };

  size_t i = 0;
  bool at_boundary = true;
  while (i < line.size()) {
    if (at_boundary && StartsWithUrl(line.substr(i))) {
      flush();
      while (i < line.size() && !IsSpace(static_cast<unsigned char>(line[i])) &&
             line[i] != ')' && line[i] != ']') {
        ++i;
      }
      continue;
    }
    const unsigned char c = static_cast<unsigned char>(line[i]);
    uint32_t cp;
    const size_t len = Utf8Length(line, i, &cp);
    if (len == 0) {
      flush();
      at_boundary = true;
      ++i;
      continue;
    }
    if (len == 1) {
      if (IsAsciiAlnum(c)) {
        current.push_back(
            static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
        at_boundary = false;
      } else if (c == '\'' && !current.empty() && WordCharAt(line, i + 1)) {
        current.push_back('\'');
        at_boundary = false;
      } else {
        flush();
        at_boundary = true;
      }
      ++i;
      continue;
    }
    if (cp == kRightSingleQuote) {
      if (!current.empty() && WordCharAt(line, i + len)) {
        current.push_back('\'');
      } else {
        flush();
        at_boundary = true;
      }
    } else if (IsUnicodePunct(cp)) {
      flush();
      at_boundary = true;
    } else {
      current.append(line.substr(i, len));
      at_boundary = false;
    }
    i += len;
  }
  flush();
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view body) {
  std::vector<std::string> tokens;
  size_t start = 0;
  while (start <= body.size()) {
    size_t end = body.find('\n', start);
    if (end == std::string_view::npos) end = body.size();
    std::string_view line = body.substr(start, end - start);
    if (!IsQuotedLine(line)) TokenizeLine(line, &tokens);
    start = end + 1;
  }
  return tokens;
}

}  // namespace argpat
