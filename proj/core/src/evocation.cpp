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

#include "asymgauge/evocation.hpp"

#include <limits>

#include "asymgauge/error.hpp"
#include "asymgauge/io.hpp"
#include "asymgauge/text.hpp"

namespace asymgauge {

std::int64_t EvocationDataset::count(const std::string &cue, const std::string &response) const {
  auto it = entries.find(cue);
  if (it == entries.end()) return 0;
  auto jt = it->second.find(response);
  return jt == it->second.end() ? 0 : jt->second;
}

EvocationDataset ingest_evocation(std::istream &source, std::string name) {
  EvocationDataset d;
  d.name = std::move(name);
  std::string line;
  std::size_t lineno = 0;
  while (io::read_line(source, line)) {
    ++lineno;
    if (io::trim(line).empty()) continue;
    // "# " lines are metadata headers written by the pipeline.
    if (line.rfind("# ", 0) == 0) continue;
    auto fields = io::split(line, '\t');
    if (fields.size() != 3) {
      throw ParseError("expected cue<TAB>response<TAB>count", lineno);
    }
    if (!text::valid_utf8(line)) throw ParseError("invalid UTF-8", lineno);
    long long n = 0;
    if (!io::parse_int(io::trim(fields[2]), n)) {
      throw ParseError("count is not an integer: '" + std::string(fields[2]) + "'", lineno);
    }
    if (n <= 0) {
      throw ValidationError("non-positive count " + std::to_string(n) + " at line " +
                            std::to_string(lineno));
    }
    std::string cue = text::normalize_word(fields[0]);
    std::string response = text::normalize_word(fields[1]);
    if (cue.empty() || response.empty()) throw ParseError("empty word", lineno);
    auto &slot = d.entries[cue][response];
    if (slot > std::numeric_limits<std::int64_t>::max() - n) {
      throw ValidationError("count overflow at line " + std::to_string(lineno));
    }
    slot += n;
    d.cue_totals[cue] += n;
  }
  return d;
}

std::string to_canonical_tsv(const EvocationDataset &dataset) {
  std::string out;
  for (const auto &[cue, responses] : dataset.entries) {
    for (const auto &[response, n] : responses) {
      out += cue;
      out += '\t';
      out += response;
      out += '\t';
      out += std::to_string(n);
      out += '\n';
    }
  }
  return out;
}

std::set<WordPair> clean_pair_filter(const EvocationDataset &dataset) {
  std::set<WordPair> out;
  for (const auto &[cue, responses] : dataset.entries) {
    for (const auto &[response, n] : responses) {
      // Visit each unordered pair once, from its lexicographically smaller cue.
      if (!(cue < response)) continue;
      if (dataset.count(response, cue) >= 1) out.emplace(cue, response);
    }
  }
  return out;
}

ConditionalTable evocation_conditionals(const EvocationDataset &dataset,
                                        const std::set<WordPair> &pairs) {
  ConditionalTable table(dataset.name);
  auto prob = [&](const std::string &a, const std::string &b) {
    std::int64_t n = dataset.count(a, b);
    if (n < 1) {
      throw PreconditionError("pair {" + a + ", " + b + "} is not clean in dataset " +
                              dataset.name);
    }
    return static_cast<double>(n) / static_cast<double>(dataset.cue_totals.at(a));
  };
  for (const auto &[a, b] : pairs) {
    if (a == b) throw PreconditionError("self pair {" + a + "} is not clean");
    table.insert(a, b, prob(a, b));
    table.insert(b, a, prob(b, a));
  }
  return table;
}

}  // namespace asymgauge
