// Copyright 2026 The asymgauge Authors.
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

#include "asymgauge/text.hpp"

#include <cstdint>

namespace asymgauge::text {

namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one code point starting at `i`, advancing `i`. Invalid sequences
// decode to kInvalid and consume one byte.
char32_t decode(std::string_view s, std::size_t &i) {
  auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
    min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
    min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
    min = 0x10000;
  } else {
    ++i;
    return kInvalid;
  }
  if (i + static_cast<std::size_t>(len) > s.size()) {
    ++i;
    return kInvalid;
  }
  for (int k = 1; k < len; ++k) {
    auto b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++i;
    return kInvalid;
  }
  i += static_cast<std::size_t>(len);
  return cp;
}

bool is_word_char(char32_t cp) {
  if (cp == kInvalid) return false;
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  }
  if (cp <= 0xBF) return false;  // C1 controls, Latin-1 punctuation and symbols
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, symbols, arrows
  if (cp >= 0x2E00 && cp <= 0x2E7F) return false;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  if (cp == 0xFEFF) return false;
  return true;
}

bool is_joiner(char32_t cp) { return cp == '\'' || cp == '-'; }

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

bool valid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  while (i < bytes.size()) {
    if (decode(bytes, i) == kInvalid) return false;
  }
  return true;
}

std::string to_lower(std::string_view word) {
  std::string out(word);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto c = static_cast<unsigned char>(out[i]);
    if (c >= 'A' && c <= 'Z') {
      out[i] = static_cast<char>(c + 32);
    } else if (c == 0xC3 && i + 1 < out.size()) {
      auto n = static_cast<unsigned char>(out[i + 1]);
      if (n >= 0x80 && n <= 0x9E && n != 0x97) out[i + 1] = static_cast<char>(n + 0x20);
      ++i;
    }
  }
  return out;
}

std::size_t count_code_points(std::string_view bytes) {
  std::size_t n = 0;
  for (unsigned char c : bytes) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::size_t code_point_index(std::string_view bytes, std::size_t byte_offset) {
  return count_code_points(bytes.substr(0, byte_offset));
}

std::size_t byte_offset(std::string_view bytes, std::size_t code_point) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if ((static_cast<unsigned char>(bytes[i]) & 0xC0) == 0x80) continue;
    if (seen == code_point) return i;
    ++seen;
  }
  return bytes.size();
}

std::string normalize_word(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char ch : raw) {
    if (is_space(static_cast<unsigned char>(ch))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back('_');
      pending_space = false;
    }
    out.push_back(ch);
  }
  return to_lower(out);
}

bool is_normalized_word(std::string_view word) {
  if (word.empty()) return false;
  for (char ch : word) {
    if (is_space(static_cast<unsigned char>(ch))) return false;
  }
  return to_lower(word) == word;
}

std::vector<Token> tokenize(std::string_view paragraph) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  std::size_t start = 0;
  std::size_t last_word_end = 0;  // byte just past the last word char in the run
  bool in_token = false;
  bool pending_joiner = false;

  auto close = [&] {
    if (in_token) tokens.push_back({start, last_word_end - start});
    in_token = false;
    pending_joiner = false;
  };

  while (i < paragraph.size()) {
    std::size_t at = i;
    char32_t cp = decode(paragraph, i);
    if (is_word_char(cp)) {
      if (!in_token) {
        in_token = true;
        start = at;
      }
      pending_joiner = false;
      last_word_end = i;
    } else if (in_token && is_joiner(cp) && !pending_joiner) {
      pending_joiner = true;
    } else {
      close();
    }
  }
  close();
  return tokens;
}

}  // namespace asymgauge::text
