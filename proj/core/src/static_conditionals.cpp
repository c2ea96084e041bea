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

#include "asymgauge/static_conditionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "asymgauge/error.hpp"
#include "asymgauge/io.hpp"
#include "asymgauge/text.hpp"

namespace asymgauge {

namespace {

long double dot(std::span<const double> x, std::span<const double> y) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += static_cast<long double>(x[i]) * static_cast<long double>(y[i]);
  }
  return s;
}

// Splits on runs of spaces/tabs.
std::vector<std::string_view> fields_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename Project>
double softmax_conditional(const std::string &b, const WordSet &support, Project project) {
  if (support.empty()) throw ConfigError("softmax support is empty");
  if (!support.count(b)) throw ConfigError("word '" + b + "' is not in the softmax support");
  double target = 0.0;
  double max_p = -std::numeric_limits<double>::infinity();
  std::vector<double> projections;
  projections.reserve(support.size());
  for (const auto &x : support) {
    double p = project(x);
    if (x == b) target = p;
    projections.push_back(p);
    max_p = std::max(max_p, p);
  }
  long double sum = 0.0L;
  for (double p : projections) sum += std::exp(static_cast<long double>(p - max_p));
  return static_cast<double>(
      std::exp(static_cast<long double>(target - max_p) - std::log(sum)));
}

}  // namespace

bool VectorTable::add(const std::string &word, std::span<const double> values) {
  if (dim_ == 0) dim_ = values.size();
  if (values.size() != dim_ || dim_ == 0) {
    throw DimensionError("vector for '" + word + "' has " + std::to_string(values.size()) +
                         " components, table dimension is " + std::to_string(dim_));
  }
  long double sq = 0.0L;
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("non-finite component in vector for '" + word + "'");
    sq += static_cast<long double>(v) * v;
  }
  if (sq == 0.0L) throw DomainError("zero vector for '" + word + "'");
  if (index_.count(word)) return false;
  index_.emplace(word, words_.size());
  words_.push_back(word);
  data_.insert(data_.end(), values.begin(), values.end());
  norms_.push_back(static_cast<double>(std::sqrt(sq)));
  return true;
}

std::size_t VectorTable::slot(const std::string &word) const {
  auto it = index_.find(word);
  if (it == index_.end()) throw AbsentWordError(word);
  return it->second;
}

std::span<const double> VectorTable::row(const std::string &word) const {
  return std::span<const double>(data_).subspan(slot(word) * dim_, dim_);
}

double VectorTable::norm(const std::string &word) const { return norms_[slot(word)]; }

VectorTable load_vectors(std::istream &source, VectorLoadStats *stats) {
  VectorLoadStats local;
  VectorTable table;
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> values;
  while (io::read_line(source, line)) {
    ++lineno;
    auto fields = fields_of(line);
    if (fields.empty()) continue;
    long long c = 0;
    long long d = 0;
    if (lineno == 1 && fields.size() == 2 && io::parse_int(fields[0], c) &&
        io::parse_int(fields[1], d)) {
      if (d <= 0) throw ParseError("header dimension must be positive", lineno);
      local.header = true;
      table = VectorTable(static_cast<std::size_t>(d));
      continue;
    }
    if (fields.size() < 2) throw ParseError("row has no vector components", lineno);
    values.clear();
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      if (!io::parse_double(fields[i], v)) {
        throw ParseError("non-numeric or non-finite component '" + std::string(fields[i]) + "'",
                         lineno);
      }
      values.push_back(v);
    }
    if (table.dim() != 0 && values.size() != table.dim()) {
      throw ParseError("expected " + std::to_string(table.dim()) + " components, got " +
                           std::to_string(values.size()),
                       lineno);
    }
    ++local.rows;
    try {
      if (!table.add(text::to_lower(fields[0]), values)) ++local.duplicates;
    } catch (const DomainError &) {
      ++local.zero_vectors;
    }
  }
  if (stats != nullptr) *stats = local;
  return table;
}

DualVectorTable::DualVectorTable(VectorTable words, VectorTable contexts)
    : word_vectors(std::move(words)), context_vectors(std::move(contexts)) {
  if (word_vectors.dim() != context_vectors.dim()) {
    throw DimensionError("word and context tables differ in dimension (" +
                         std::to_string(word_vectors.dim()) + " vs " +
                         std::to_string(context_vectors.dim()) + ")");
  }
}

double projection(const VectorTable &table, const std::string &b, const std::string &a) {
  return static_cast<double>(dot(table.row(b), table.row(a)) / table.norm(a));
}

double projection(const DualVectorTable &table, const std::string &b, const std::string &a) {
  return static_cast<double>(dot(table.context_vectors.row(b), table.word_vectors.row(a)) /
                             table.word_vectors.norm(a));
}

double cosine(const VectorTable &table, const std::string &a, const std::string &b) {
  long double c = dot(table.row(a), table.row(b)) /
                  (static_cast<long double>(table.norm(a)) * table.norm(b));
  return static_cast<double>(std::clamp(c, -1.0L, 1.0L));
}

double conditional(const VectorTable &table, const std::string &a, const std::string &b,
                   const WordSet &support) {
  table.row(a);
  return softmax_conditional(b, support,
                             [&](const std::string &x) { return projection(table, x, a); });
}

double conditional(const DualVectorTable &table, const std::string &a, const std::string &b,
                   const WordSet &support) {
  table.word_vectors.row(a);
  return softmax_conditional(b, support,
                             [&](const std::string &x) { return projection(table, x, a); });
}

StaticConditionalModel::StaticConditionalModel(const VectorTable &table, WordSet support)
    : single_(&table), support_(std::move(support)) {
  if (support_.empty()) throw ConfigError("softmax support is empty");
}

StaticConditionalModel::StaticConditionalModel(const DualVectorTable &table, WordSet support)
    : dual_(&table), support_(std::move(support)) {
  if (support_.empty()) throw ConfigError("softmax support is empty");
}

double StaticConditionalModel::project(const std::string &x, const std::string &a) const {
  return single_ != nullptr ? projection(*single_, x, a) : projection(*dual_, x, a);
}

StaticConditionalModel::Normalizer StaticConditionalModel::normalizer(const std::string &a) const {
  {
    std::shared_lock lock(cache_mutex_);
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
  }
  std::vector<double> projections;
  projections.reserve(support_.size());
  double max_p = -std::numeric_limits<double>::infinity();
  for (const auto &x : support_) {
    projections.push_back(project(x, a));
    max_p = std::max(max_p, projections.back());
  }
  long double sum = 0.0L;
  for (double p : projections) sum += std::exp(static_cast<long double>(p - max_p));
  Normalizer n{max_p, std::log(sum)};
  std::unique_lock lock(cache_mutex_);
  cache_.emplace(a, n);  // a concurrent fill computed the same value
  return n;
}

double StaticConditionalModel::log_conditional(const std::string &a, const std::string &b) const {
  if (!support_.count(b)) throw ConfigError("word '" + b + "' is not in the softmax support");
  Normalizer n = normalizer(a);
  return static_cast<double>(static_cast<long double>(project(b, a) - n.max_projection) -
                             n.log_sum);
}

double StaticConditionalModel::conditional(const std::string &a, const std::string &b) const {
  return std::exp(log_conditional(a, b));
}

ConditionalTable StaticConditionalModel::table(const std::vector<WordPair> &pairs,
                                               std::string resource_id, unsigned threads) const {
  // Flatten to distinct ordered (a, b) requests, grouped by cue so each
  // worker fills a disjoint set of normalizers.
  std::map<std::string, std::set<std::string>> by_cue;
  for (const auto &[a, b] : pairs) {
    by_cue[a].insert(b);
    by_cue[b].insert(a);
  }
  std::vector<const std::pair<const std::string, std::set<std::string>> *> cues;
  for (const auto &entry : by_cue) cues.push_back(&entry);

  std::vector<std::vector<std::pair<WordPair, double>>> results(cues.size());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < cues.size(); i += step) {
      const auto &[a, targets] = *cues[i];
      for (const auto &b : targets) {
        double p = conditional(a, b);
        // Keep underflowed probabilities representable (and their logs finite).
        p = std::max(p, std::numeric_limits<double>::min());
        results[i].emplace_back(WordPair{a, b}, p);
      }
    }
  };
  unsigned workers = std::max(1u, threads);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  ConditionalTable out(std::move(resource_id));
  for (const auto &chunk : results) {
    for (const auto &[key, p] : chunk) out.insert(key.first, key.second, p);
  }
  return out;
}

}  // namespace asymgauge
