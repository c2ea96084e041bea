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

#include "asymgauge/converters.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <regex>

#include "asymgauge/error.hpp"
#include "asymgauge/io.hpp"
#include "asymgauge/text.hpp"

namespace asymgauge::converters {

namespace {

using CountTable = std::map<std::string, std::map<std::string, std::int64_t>>;

void emit(const CountTable &counts, const std::map<std::string, std::int64_t> &totals,
          std::ostream &out) {
  for (const auto &[cue, responses] : counts) {
    std::int64_t listed = 0;
    for (const auto &[response, n] : responses) {
      out << cue << '\t' << response << '\t' << n << '\n';
      listed += n;
    }
    auto it = totals.find(cue);
    if (it != totals.end() && it->second > listed) {
      out << cue << '\t' << kResidualResponse << '\t' << (it->second - listed) << '\n';
    }
  }
}

std::size_t column(const std::vector<std::string> &header, std::string_view name,
                   bool required = true) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (text::to_lower(io::trim(header[i])) == text::to_lower(name)) return i;
  }
  if (required) throw ParseError("header lacks column '" + std::string(name) + "'", 1);
  return header.size();
}

std::string attribute(const std::string &tag, const std::string &name) {
  std::regex re(name + "\\s*=\\s*\"([^\"]*)\"");
  std::smatch m;
  if (std::regex_search(tag, m, re)) return m[1].str();
  return {};
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "canonical" || name.empty()) return Format::kCanonical;
  if (name == "swow") return Format::kSwow;
  if (name == "usf" || name == "fa") return Format::kUsf;
  if (name == "eat") return Format::kEat;
  throw ConfigError("unknown evocation format '" + std::string(name) + "'");
}

std::vector<std::string> split_csv_line(std::string_view line, char sep) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == sep) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

void convert_swow(std::istream &in, std::ostream &out) {
  std::string line;
  if (!io::read_line(in, line)) return;
  auto header = split_csv_line(line);
  std::size_t cue_col = column(header, "cue");
  std::vector<std::size_t> slots;
  for (std::string_view r : {"R1", "R2", "R3"}) {
    std::size_t c = column(header, r, false);
    if (c < header.size()) slots.push_back(c);
  }
  if (slots.empty()) throw ParseError("header lacks response columns R1/R2/R3", 1);

  CountTable counts;
  std::size_t lineno = 1;
  while (io::read_line(in, line)) {
    ++lineno;
    if (io::trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() < header.size()) throw ParseError("short SWOW row", lineno);
    std::string cue = text::normalize_word(fields[cue_col]);
    if (cue.empty()) continue;
    for (std::size_t c : slots) {
      std::string_view raw = io::trim(fields[c]);
      if (raw.empty() || raw == "NA" || raw == "No more responses") continue;
      counts[cue][text::normalize_word(raw)] += 1;
    }
  }
  emit(counts, {}, out);
}

void convert_usf(std::istream &in, std::ostream &out) {
  std::string line;
  if (!io::read_line(in, line)) return;
  auto header = split_csv_line(line);
  std::size_t cue_col = column(header, "CUE");
  std::size_t target_col = column(header, "TARGET");
  std::size_t group_col = column(header, "#G");
  std::size_t produced_col = column(header, "#P");

  CountTable counts;
  std::map<std::string, std::int64_t> totals;
  std::size_t lineno = 1;
  while (io::read_line(in, line)) {
    ++lineno;
    if (io::trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() < header.size()) throw ParseError("short FA row", lineno);
    long long group = 0;
    long long produced = 0;
    if (!io::parse_int(io::trim(fields[group_col]), group) ||
        !io::parse_int(io::trim(fields[produced_col]), produced)) {
      throw ParseError("non-integer #G/#P", lineno);
    }
    std::string cue = text::normalize_word(fields[cue_col]);
    std::string target = text::normalize_word(fields[target_col]);
    if (cue.empty() || target.empty() || produced <= 0) continue;
    counts[cue][target] += produced;
    totals[cue] = std::max<std::int64_t>(totals[cue], group);
  }
  emit(counts, totals, out);
}

void convert_eat(std::istream &in, std::ostream &out) {
  CountTable counts;
  std::map<std::string, std::int64_t> totals;
  std::string cue;
  std::string line;
  std::string pending;
  std::size_t lineno = 0;
  // Tags may span lines; accumulate until each '>' closes a tag.
  while (io::read_line(in, line)) {
    ++lineno;
    pending += line;
    pending += ' ';
    std::size_t open;
    while ((open = pending.find('<')) != std::string::npos) {
      std::size_t close = pending.find('>', open);
      if (close == std::string::npos) break;
      std::string tag = pending.substr(open, close - open + 1);
      pending.erase(0, close + 1);
      if (tag.rfind("<stimulus", 0) == 0) {
        cue = text::normalize_word(attribute(tag, "word"));
        long long all = 0;
        if (io::parse_int(attribute(tag, "all"), all) && !cue.empty()) totals[cue] = all;
      } else if (tag.rfind("</stimulus", 0) == 0) {
        cue.clear();
      } else if (tag.rfind("<response", 0) == 0) {
        if (cue.empty()) throw ParseError("<response> outside <stimulus>", lineno);
        long long n = 0;
        if (!io::parse_int(attribute(tag, "n"), n)) {
          throw ParseError("response without integer n", lineno);
        }
        std::string response = text::normalize_word(attribute(tag, "word"));
        if (!response.empty() && n > 0) counts[cue][response] += n;
      }
    }
  }
  emit(counts, totals, out);
}

void convert(Format format, std::istream &in, std::ostream &out) {
  switch (format) {
    case Format::kCanonical: {
      std::string line;
      while (io::read_line(in, line)) out << line << '\n';
      return;
    }
    case Format::kSwow:
      return convert_swow(in, out);
    case Format::kUsf:
      return convert_usf(in, out);
    case Format::kEat:
      return convert_eat(in, out);
  }
}

}  // namespace asymgauge::converters
