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
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "asymgauge/conditional_table.hpp"

namespace asymgauge {

// Dense word vectors of a single dimension. Zero vectors are rejected at
// load time, so every norm is positive.
class VectorTable {
 public:
  VectorTable() = default;
  explicit VectorTable(std::size_t dim) : dim_(dim) {}

  // Returns false (and stores nothing) when `word` is already present.
  // Throws DimensionError / DomainError for a bad vector.
  bool add(const std::string &word, std::span<const double> values);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool contains(const std::string &word) const { return index_.count(word) != 0; }

  // Throws AbsentWordError.
  std::span<const double> row(const std::string &word) const;
  double norm(const std::string &word) const;

  const std::vector<std::string> &words() const noexcept { return words_; }
  WordSet vocabulary() const { return WordSet(words_.begin(), words_.end()); }

 private:
  std::size_t slot(const std::string &word) const;

  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
  std::vector<double> norms_;
};

struct VectorLoadStats {
  std::size_t rows = 0;
  std::size_t duplicates = 0;
  std::size_t zero_vectors = 0;  // skipped
  bool header = false;
};

// word2vec/GloVe text format: `word v1 ... vd` per line, with an optional
// `count dim` header line. Words are lowercased; duplicate words keep their
// first vector and zero vectors are skipped, both counted in `stats`.
// Throws ParseError (with line number) for ragged or non-finite rows.
VectorTable load_vectors(std::istream &source, VectorLoadStats *stats = nullptr);

// Word matrix for the conditioning word, context matrix for the predicted one.
struct DualVectorTable {
  VectorTable word_vectors;
  VectorTable context_vectors;

  // Throws DimensionError when the two tables disagree on dimension.
  DualVectorTable(VectorTable words, VectorTable contexts);
};

// emb(b) . emb(a) / |emb(a)|
double projection(const VectorTable &table, const std::string &b, const std::string &a);
// ctx(b) . word(a) / |word(a)|
double projection(const DualVectorTable &table, const std::string &b, const std::string &a);

double cosine(const VectorTable &table, const std::string &a, const std::string &b);

// Softmax of projections over `support`:
//   P(b|a) = exp(proj(b|a)) / sum_{x in support} exp(proj(x|a))
// evaluated with max subtraction and an extended-precision denominator.
// Throws ConfigError for an empty support or b outside the support.
double conditional(const VectorTable &table, const std::string &a, const std::string &b,
                   const WordSet &support);
double conditional(const DualVectorTable &table, const std::string &a, const std::string &b,
                   const WordSet &support);

// Support-bound conditional model with a per-cue cache of the softmax
// normalizer. Safe for concurrent use; cache fills are idempotent. The vector
// table must outlive the model.
class StaticConditionalModel {
 public:
  StaticConditionalModel(const VectorTable &table, WordSet support);
  StaticConditionalModel(const DualVectorTable &table, WordSet support);

  double conditional(const std::string &a, const std::string &b) const;
  double log_conditional(const std::string &a, const std::string &b) const;

  const WordSet &support() const noexcept { return support_; }

  // Both directions of every ordered pair, computed on `threads` workers.
  ConditionalTable table(const std::vector<WordPair> &pairs, std::string resource_id,
                         unsigned threads = 1) const;

 private:
  struct Normalizer {
    double max_projection;
    long double log_sum;  // log sum_x exp(proj(x|a) - max_projection)
  };

  double project(const std::string &x, const std::string &a) const;
  Normalizer normalizer(const std::string &a) const;

  const VectorTable *single_ = nullptr;
  const DualVectorTable *dual_ = nullptr;
  WordSet support_;
  mutable std::shared_mutex cache_mutex_;
  mutable std::unordered_map<std::string, Normalizer> cache_;
};

}  // namespace asymgauge
