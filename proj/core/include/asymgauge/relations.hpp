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

#include <compare>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "asymgauge/conditional_table.hpp"

namespace asymgauge {

inline constexpr std::string_view kRelatedTo = "relatedTo";

// A directed knowledge-graph assertion head --relation--> tail.
struct KgEdge {
  std::string head;
  std::string relation;
  std::string tail;

  auto operator<=>(const KgEdge &) const = default;
};

struct ConceptNetStats {
  std::size_t rows = 0;
  std::size_t edges = 0;
  std::size_t malformed = 0;       // skipped, counted as warnings
  std::size_t other_language = 0;  // dropped by the language filter
};

// Parses the tab-separated ConceptNet 5 assertion dump (assertion URI,
// relation URI, start URI, end URI, JSON metadata). Keeps edges whose two
// endpoints are `/c/<language_tag>/...` concepts, reducing each concept to its
// surface word and each relation to its camel-cased last path segment
// (`/r/IsA` -> `isA`). Malformed rows are skipped and counted.
std::vector<KgEdge> parse_conceptnet(std::istream &dump, std::string_view language_tag,
                                     ConceptNetStats *stats = nullptr);

// S(r): ordered (head, tail) pairs annotated with relation r.
struct RelationPairSet {
  std::string relation;
  std::vector<WordPair> pairs;

  friend bool operator==(const RelationPairSet &, const RelationPairSet &) = default;
};

using RelationPairSets = std::map<std::string, RelationPairSet>;

// Annotates unordered pairs with every KG edge joining them, in either
// orientation, adding (head, tail) to S(relation) once per distinct edge.
// Pairs with no edge go to S(relatedTo) in lexicographic order. Pairs with a
// word outside `vocab`, and self pairs, are skipped. Output order follows
// the input pair order; orientations of one pair are ordered
// lexicographically. Throws ConfigError for an empty vocabulary.
RelationPairSets build_pair_sets(const std::vector<WordPair> &pairs,
                                 const std::vector<KgEdge> &edges, const WordSet &vocab);

// Throws PreconditionError for an empty list.
WordSet intersect_vocabularies(const std::vector<WordSet> &vocabularies);

// `a<TAB>b` rows.
std::string to_pair_tsv(const RelationPairSet &set);
RelationPairSet parse_pair_tsv(std::istream &in, std::string relation);

// Writes `<dir>/<relation>.tsv` for every set.
void write_pair_sets(const std::filesystem::path &dir, const RelationPairSets &sets,
                     std::string_view metadata_header = {});
RelationPairSets read_pair_sets(const std::filesystem::path &dir);

}  // namespace asymgauge
