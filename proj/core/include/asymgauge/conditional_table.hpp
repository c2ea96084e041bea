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
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

namespace asymgauge {

// An ordered word pair. For conditionals, (a, b) keys P(b | a); for LAR
// maps, (a, b) keys LAR(a; b).
using WordPair = std::pair<std::string, std::string>;

using WordSet = std::set<std::string>;

inline WordPair make_unordered(std::string x, std::string y) {
  if (y < x) std::swap(x, y);
  return {std::move(x), std::move(y)};
}

// Sparse (a, b) -> P(b | a) with 0 < P <= 1. Absent pairs are a distinct
// outcome, never 0. Treated as immutable once built.
class ConditionalTable {
 public:
  ConditionalTable() = default;
  explicit ConditionalTable(std::string resource_id) : resource_id_(std::move(resource_id)) {}

  const std::string &resource_id() const noexcept { return resource_id_; }

  // Throws DomainError unless 0 < p <= 1. Overwrites an existing entry.
  void insert(const std::string &a, const std::string &b, double p);

  // P(b | a), or nullopt when the pair is not stored.
  std::optional<double> get(const std::string &a, const std::string &b) const;

  bool contains(const std::string &a, const std::string &b) const {
    return probs_.count({a, b}) != 0;
  }

  // True when both P(b|a) and P(a|b) are stored.
  bool has_both(const std::string &a, const std::string &b) const {
    return contains(a, b) && contains(b, a);
  }

  std::size_t size() const noexcept { return probs_.size(); }
  const std::map<WordPair, double> &entries() const noexcept { return probs_; }

  // `a<TAB>b<TAB>prob` rows sorted by (a, b), 17 significant digits.
  std::string to_tsv() const;

  // Lines starting with '#' are metadata and skipped.
  static ConditionalTable parse_tsv(std::istream &in, std::string resource_id);

  friend bool operator==(const ConditionalTable &, const ConditionalTable &) = default;

 private:
  std::string resource_id_;
  std::map<WordPair, double> probs_;
};

}  // namespace asymgauge
