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
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asymgauge/conditional_table.hpp"
#include "asymgauge/relations.hpp"

namespace asymgauge {

// Log asymmetry ratio ln P(b|a) - ln P(a|b). Throws DomainError unless both
// probabilities lie in (0, 1].
double lar(double p_ba, double p_ab);

// Ordered pair (a; b) -> LAR(a; b) for one resource. Values are finite and
// antisymmetric: entries[(a;b)] == -entries[(b;a)] when both are present.
class LarMap {
 public:
  LarMap() = default;
  explicit LarMap(std::string resource_id) : resource_id_(std::move(resource_id)) {}

  // Throws DomainError for a non-finite value or one that breaks
  // antisymmetry with an existing reverse entry.
  void insert(const std::string &a, const std::string &b, double value);

  std::optional<double> get(const std::string &a, const std::string &b) const;

  const std::string &resource_id() const noexcept { return resource_id_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<WordPair, double> &entries() const noexcept { return entries_; }

 private:
  std::string resource_id_;
  std::map<WordPair, double> entries_;
};

// LARs for the ordered pairs whose two conditionals are both stored in
// `table`. Pairs lacking a direction are appended to `skipped` if given.
LarMap lar_map(const ConditionalTable &table, std::span<const WordPair> pairs,
               std::vector<WordPair> *skipped = nullptr);

// Mean LAR over the ordered pairs. Throws CoverageError listing missing
// pairs, PreconditionError for an empty set.
double alar(const LarMap &lars, std::span<const WordPair> pairs);
double alar(const LarMap &lars, const RelationPairSet &set);

// Fractional ranks (1-based, ties get the average rank).
std::vector<double> fractional_ranks(std::span<const double> values);

// Pearson correlation of fractional ranks. Throws DimensionError for length
// mismatch or fewer than two values, UndefinedCorrelationError when either
// vector is constant.
double spearman(std::span<const double> x, std::span<const double> y);

struct Correlation {
  double rho = 0.0;
  std::size_t n = 0;
  double p_value = 1.0;
  bool exact_p = false;  // permutation p-value rather than t approximation
};

// Two-sided p-value from t = rho * sqrt((n - 2) / (1 - rho^2)) with n - 2
// degrees of freedom.
double spearman_p_value_t(double rho, std::size_t n);

// Two-sided exact permutation p-value: the fraction of the n! orderings of y
// whose |rho| reaches the observed |rho|. Requires n <= 10.
double spearman_p_value_exact(std::span<const double> x, std::span<const double> y);

// Spearman with a p-value: exact for n <= 10, t approximation above.
Correlation spearman_test(std::span<const double> x, std::span<const double> y);

// CAM: Spearman between the two resources' LARs aligned over `pairs`.
// Throws CoverageError when a pair is missing from either map.
double cam(std::span<const WordPair> pairs, const LarMap &lars_i, const LarMap &lars_j);
Correlation cam_test(std::span<const WordPair> pairs, const LarMap &lars_i, const LarMap &lars_j);

// Discretized direction: 1 if lar > gamma, -1 if lar < -gamma, else 0.
int direction(double lar_value, double gamma);

inline const std::vector<double> kDefaultGammas = {0.0, 0.1, 1.0, 10.0};

// Fraction of pairs whose discretized directions agree between the data and
// embedding LARs. Throws CoverageError / PreconditionError like cam.
double directional_accuracy(const LarMap &lars_data, const LarMap &lars_emb,
                            std::span<const WordPair> pairs, double gamma);

struct FactorEntry {
  WordPair pair;
  double factor = 0.0;
};

struct Bin {
  double mean_factor = 0.0;
  double accuracy = 0.0;
  std::size_t size = 0;
};

// Sorts by factor (stable, ascending), cuts consecutive bins of `bin_size`
// and reports each bin's mean factor and mean accuracy_fn. A trailing bin
// smaller than bin_size / 4 is dropped.
std::vector<Bin> bin_analysis(std::vector<FactorEntry> entries,
                              const std::function<double(const WordPair &)> &accuracy_fn,
                              std::size_t bin_size);

// sqrt(P(a|b) P(b|a)); inputs in [0, 1].
double geometric_mean_similarity(double p_ab, double p_ba);

struct SimilarityResult {
  Correlation correlation;
  std::size_t shared = 0;
  std::size_t excluded = 0;  // gold pairs without a model score
};

// Spearman between model scores and gold ratings over the gold pairs that
// have a score (looked up in either order). Throws CoverageError when fewer
// than two pairs are shared.
SimilarityResult similarity_eval(const std::map<WordPair, double> &scores,
                                 const std::map<WordPair, double> &gold);

// Reads `word1<TAB>word2<TAB>rating` or the space-separated MEN layout.
std::map<WordPair, double> parse_similarity_gold(std::istream &in);

// sign(x) * ln(1 + |x| * scale): the signed log used for plotting ALARs of
// very different magnitude on one axis.
double signed_log(double x, double scale = 1.0);

}  // namespace asymgauge
