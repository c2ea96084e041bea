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

#include "asymgauge/relations.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>

#include "asymgauge/error.hpp"
#include "asymgauge/io.hpp"
#include "asymgauge/text.hpp"

namespace asymgauge {

namespace {

enum class UriKind { kOk, kOtherLanguage, kMalformed };

UriKind concept_word(std::string_view uri, std::string_view lang, std::string &word) {
  auto segs = io::split(uri, '/');
  // "", "c", lang, word, ...
  if (segs.size() < 4 || !segs[0].empty() || segs[1] != "c") {
    return uri.rfind("/c/", 0) == 0 ? UriKind::kMalformed : UriKind::kOtherLanguage;
  }
  if (segs[2] != lang) return UriKind::kOtherLanguage;
  if (segs[3].empty()) return UriKind::kMalformed;
  word = text::normalize_word(segs[3]);
  return UriKind::kOk;
}

bool relation_name(std::string_view uri, std::string &name) {
  if (uri.rfind("/r/", 0) != 0) return false;
  std::string_view last = uri.substr(uri.find_last_of('/') + 1);
  if (last.empty()) return false;
  name.assign(last);
  if (name[0] >= 'A' && name[0] <= 'Z') name[0] = static_cast<char>(name[0] - 'A' + 'a');
  return true;
}

}  // namespace

std::vector<KgEdge> parse_conceptnet(std::istream &dump, std::string_view language_tag,
                                     ConceptNetStats *stats) {
  ConceptNetStats local;
  std::vector<KgEdge> edges;
  std::string line;
  while (io::read_line(dump, line)) {
    if (line.empty()) continue;
    ++local.rows;
    auto fields = io::split(line, '\t');
    KgEdge edge;
    if (fields.size() < 4 || !text::valid_utf8(line) || !relation_name(fields[1], edge.relation)) {
      ++local.malformed;
      continue;
    }
    UriKind h = concept_word(fields[2], language_tag, edge.head);
    UriKind t = concept_word(fields[3], language_tag, edge.tail);
    if (h == UriKind::kMalformed || t == UriKind::kMalformed) {
      ++local.malformed;
      continue;
    }
    if (h == UriKind::kOtherLanguage || t == UriKind::kOtherLanguage) {
      ++local.other_language;
      continue;
    }
    edges.push_back(std::move(edge));
  }
  local.edges = edges.size();
  if (stats != nullptr) *stats = local;
  return edges;
}

RelationPairSets build_pair_sets(const std::vector<WordPair> &pairs,
                                 const std::vector<KgEdge> &edges, const WordSet &vocab) {
  if (vocab.empty()) throw ConfigError("vocabulary intersection is empty");

  // Unordered pair -> distinct (relation, head, tail) edges joining it.
  std::unordered_map<std::string, std::set<KgEdge>> by_pair;
  auto key_of = [](const std::string &x, const std::string &y) {
    return x < y ? x + '\t' + y : y + '\t' + x;
  };
  for (const auto &e : edges) {
    if (e.head == e.tail) continue;
    by_pair[key_of(e.head, e.tail)].insert(
        KgEdge{e.head, e.relation, e.tail});
  }

  RelationPairSets sets;
  std::map<std::string, std::set<WordPair>> seen;
  auto add = [&](const std::string &relation, const std::string &head, const std::string &tail) {
    if (!seen[relation].emplace(head, tail).second) return;
    auto &s = sets[relation];
    s.relation = relation;
    s.pairs.emplace_back(head, tail);
  };

  for (const auto &[x, y] : pairs) {
    if (x == y || !vocab.count(x) || !vocab.count(y)) continue;
    auto it = by_pair.find(key_of(x, y));
    if (it == by_pair.end()) {
      const auto &[lo, hi] = x < y ? std::tie(x, y) : std::tie(y, x);
      add(std::string(kRelatedTo), lo, hi);
      continue;
    }
    // std::set<KgEdge> orders by (head, relation, tail): within a relation the
    // lexicographically smaller head comes first.
    for (const auto &e : it->second) add(e.relation, e.head, e.tail);
  }
  return sets;
}

WordSet intersect_vocabularies(const std::vector<WordSet> &vocabularies) {
  if (vocabularies.empty()) throw PreconditionError("no vocabularies to intersect");
  auto smallest = std::min_element(vocabularies.begin(), vocabularies.end(),
                                   [](const auto &l, const auto &r) { return l.size() < r.size(); });
  WordSet out;
  for (const auto &w : *smallest) {
    bool everywhere = std::all_of(vocabularies.begin(), vocabularies.end(),
                                  [&](const WordSet &v) { return v.count(w) != 0; });
    if (everywhere) out.insert(w);
  }
  return out;
}

std::string to_pair_tsv(const RelationPairSet &set) {
  std::string out;
  for (const auto &[a, b] : set.pairs) {
    out += a;
    out += '\t';
    out += b;
    out += '\n';
  }
  return out;
}

RelationPairSet parse_pair_tsv(std::istream &in, std::string relation) {
  RelationPairSet set{std::move(relation), {}};
  std::string line;
  std::size_t lineno = 0;
  while (io::read_line(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    auto fields = io::split(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError("expected a<TAB>b", lineno);
    }
    set.pairs.emplace_back(std::string(fields[0]), std::string(fields[1]));
  }
  return set;
}

void write_pair_sets(const std::filesystem::path &dir, const RelationPairSets &sets,
                     std::string_view metadata_header) {
  std::filesystem::create_directories(dir);
  for (const auto &[relation, set] : sets) {
    std::string body(metadata_header);
    body += to_pair_tsv(set);
    io::write_file_atomic(dir / (relation + ".tsv"), body);
  }
}

RelationPairSets read_pair_sets(const std::filesystem::path &dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("pair-set directory missing: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".tsv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  RelationPairSets sets;
  for (const auto &f : files) {
    std::ifstream in(f);
    std::string relation = f.stem().string();
    try {
      sets.emplace(relation, parse_pair_tsv(in, relation));
    } catch (const ParseError &e) {
      throw ParseError(f.string() + ": " + e.what());
    }
  }
  return sets;
}

}  // namespace asymgauge
