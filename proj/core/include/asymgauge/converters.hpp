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

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

// Adapters from native free-association distributions to the canonical
// `cue<TAB>response<TAB>count` format read by ingest_evocation.
//
// Where the native format reports a per-cue total larger than the sum of the
// listed responses (FA's group size, EAT's "all" attribute), the difference
// is emitted as a row for the reserved response `__other__`. That keeps
// count(a is cue) exact; the reserved token never survives vocabulary
// intersection.
namespace asymgauge::converters {

inline constexpr std::string_view kResidualResponse = "__other__";

enum class Format { kCanonical, kSwow, kUsf, kEat };

// "canonical", "swow", "usf" (alias "fa"), "eat". Throws ConfigError.
Format parse_format(std::string_view name);

// SWOW-EN preprocessed CSV with a header naming `cue`, `R1`, `R2`, `R3`.
// All response slots are summed with equal weight; empty, "NA" and
// "No more responses" slots are skipped.
void convert_swow(std::istream &in, std::ostream &out);

// USF free-association norms (comma separated, header with CUE, TARGET,
// #G, #P). Counts are #P; #G is the cue total.
void convert_usf(std::istream &in, std::ostream &out);

// EAT stimulus-response XML:
//   <stimulus word="X" all="N" ...> <response word="Y" n="K" .../> ...
void convert_eat(std::istream &in, std::ostream &out);

void convert(Format format, std::istream &in, std::ostream &out);

// RFC 4180-style field splitting (quotes, doubled quotes).
std::vector<std::string> split_csv_line(std::string_view line, char sep = ',');

}  // namespace asymgauge::converters
