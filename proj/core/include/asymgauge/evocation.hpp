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
#include <istream>
#include <map>
#include <set>
#include <string>

#include "asymgauge/conditional_table.hpp"

namespace asymgauge {

// Cue -> response count table from a free-association experiment.
//
// Counts are always >= 1. `cue_totals` hold the unfiltered per-cue response
// totals and are never recomputed, so filtering pairs never rescales the
// count-based conditionals.
struct EvocationDataset {
  std::string name;
  std::map<std::string, std::map<std::string, std::int64_t>> entries;
  std::map<std::string, std::int64_t> cue_totals;

  // 0 when the response was never given for the cue.
  std::int64_t count(const std::string &cue, const std::string &response) const;

  friend bool operator==(const EvocationDataset &, const EvocationDataset &) = default;
};

// Reads canonical `cue<TAB>response<TAB>count` rows. Words are normalized
// (lowercase, whitespace runs -> '_'); duplicate (cue, response) rows are
// summed. Blank lines and lines starting with "# " are skipped.
EvocationDataset ingest_evocation(std::istream &source, std::string name);

// Canonical TSV of the dataset, one row per (cue, response), sorted.
std::string to_canonical_tsv(const EvocationDataset &dataset);

// Unordered pairs {a, b} (a < b, a != b) observed in both directions.
std::set<WordPair> clean_pair_filter(const EvocationDataset &dataset);

// Count-based P_D(b|a) = entries[a][b] / cue_totals[a] for both directions
// of every pair. Throws PreconditionError for a pair that is not clean.
ConditionalTable evocation_conditionals(const EvocationDataset &dataset,
                                        const std::set<WordPair> &pairs);

}  // namespace asymgauge
