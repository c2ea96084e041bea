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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace asymgauge::text {

bool valid_utf8(std::string_view bytes);

// Lowercases ASCII and the Latin-1 supplement capitals (U+00C0..U+00DE).
// Everything else passes through unchanged.
std::string to_lower(std::string_view word);

std::size_t count_code_points(std::string_view bytes);

// Code-point index of byte offset `byte_offset` within `bytes`.
std::size_t code_point_index(std::string_view bytes, std::size_t byte_offset);

// Byte offset of the `code_point`-th code point; bytes.size() past the end.
std::size_t byte_offset(std::string_view bytes, std::size_t code_point);

// Evocation/KG word normalization: lowercase, trim, and collapse each
// internal whitespace run into a single underscore.
std::string normalize_word(std::string_view raw);

// True when `word` is lowercase, non-empty and contains no whitespace.
bool is_normalized_word(std::string_view word);

struct Token {
  std::size_t offset;  // byte offset of the first byte
  std::size_t length;  // byte length
};

// Word tokens are maximal runs of word characters. Word characters are ASCII
// letters and digits plus any non-ASCII code point outside the common
// punctuation blocks. An apostrophe or hyphen joins two word characters but
// never starts or ends a token.
std::vector<Token> tokenize(std::string_view paragraph);

}  // namespace asymgauge::text
