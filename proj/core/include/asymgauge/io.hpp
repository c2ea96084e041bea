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

#include <cstdint>
#include <filesystem>
#include <istream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace asymgauge::io {

// Opens a file for reading. Gzip-compressed files are decompressed
// transparently; plain files pass through unchanged.
std::unique_ptr<std::istream> open_input(const std::filesystem::path &path);

std::string read_file(const std::filesystem::path &path);

// Writes `contents` to a sibling temporary, fsyncs it and renames it over
// `path`, so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path &path, std::string_view contents);

// Reads one LF-terminated line, dropping a trailing CR. Returns false at EOF.
bool read_line(std::istream &in, std::string &line);

std::vector<std::string_view> split(std::string_view text, char sep);

std::string_view trim(std::string_view text);

// Shortest form that round-trips through strtod: 17 significant digits.
std::string format_g17(double value);

std::string format_fixed(double value, int decimals);

std::uint64_t fnv1a64(std::string_view bytes);

std::string hex64(std::uint64_t value);

// CRC-32 of the (decompressed-as-stored) file bytes, as 8 hex digits.
std::string file_checksum(const std::filesystem::path &path);

// Parses a base-10 signed integer spanning the whole view.
bool parse_int(std::string_view text, long long &out);

// Parses a finite double spanning the whole view.
bool parse_double(std::string_view text, double &out);

}  // namespace asymgauge::io
