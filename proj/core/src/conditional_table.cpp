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

#include "asymgauge/conditional_table.hpp"

#include <cmath>

#include "asymgauge/error.hpp"
#include "asymgauge/io.hpp"

namespace asymgauge {

void ConditionalTable::insert(const std::string &a, const std::string &b, double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError("conditional P(" + b + "|" + a + ") = " + io::format_g17(p) +
                      " outside (0, 1]");
  }
  probs_[{a, b}] = p;
}

std::optional<double> ConditionalTable::get(const std::string &a, const std::string &b) const {
  auto it = probs_.find({a, b});
  if (it == probs_.end()) return std::nullopt;
  return it->second;
}

std::string ConditionalTable::to_tsv() const {
  std::string out;
  for (const auto &[key, p] : probs_) {
    out += key.first;
    out += '\t';
    out += key.second;
    out += '\t';
    out += io::format_g17(p);
    out += '\n';
  }
  return out;
}

ConditionalTable ConditionalTable::parse_tsv(std::istream &in, std::string resource_id) {
  ConditionalTable table(std::move(resource_id));
  std::string line;
  std::size_t lineno = 0;
  while (io::read_line(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    auto fields = io::split(line, '\t');
    double p = 0.0;
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
        !io::parse_double(fields[2], p)) {
      throw ParseError("expected a<TAB>b<TAB>prob", lineno);
    }
    try {
      table.insert(std::string(fields[0]), std::string(fields[1]), p);
    } catch (const DomainError &e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return table;
}

}  // namespace asymgauge
