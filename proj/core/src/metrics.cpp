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

#include "asymgauge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "asymgauge/error.hpp"
#include "asymgauge/io.hpp"
#include "asymgauge/text.hpp"

namespace asymgauge {

namespace {

std::string pair_label(const WordPair &p) { return p.first + ";" + p.second; }

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

void check_inputs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DimensionError("spearman inputs differ in length (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) throw DimensionError("spearman needs at least two observations");
  if (constant(x) || constant(y)) {
    throw UndefinedCorrelationError("spearman correlation undefined for a constant vector");
  }
}

// Pearson correlation of two rank vectors.
double rank_pearson(std::span<const double> rx, std::span<const double> ry) {
  const long double n = static_cast<long double>(rx.size());
  long double mx = 0.0L;
  long double my = 0.0L;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0.0L;
  long double sxx = 0.0L;
  long double syy = 0.0L;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    long double dx = rx[i] - mx;
    long double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  long double r = sxy / std::sqrt(sxx * syy);
  return static_cast<double>(std::clamp(r, -1.0L, 1.0L));
}

// Aligned LAR vectors for `pairs`, first occurrence of each pair only.
void align(std::span<const WordPair> pairs, const LarMap &li, const LarMap &lj,
           std::vector<double> &xi, std::vector<double> &xj) {
  std::vector<std::string> missing;
  std::set<WordPair> seen;
  for (const auto &p : pairs) {
    if (!seen.insert(p).second) continue;
    auto vi = li.get(p.first, p.second);
    auto vj = lj.get(p.first, p.second);
    if (!vi || !vj) {
      missing.push_back(pair_label(p));
      continue;
    }
    xi.push_back(*vi);
    xj.push_back(*vj);
  }
  if (!missing.empty()) {
    throw CoverageError(std::to_string(missing.size()) + " pair(s) missing from " +
                            li.resource_id() + " or " + lj.resource_id(),
                        std::move(missing));
  }
}

}  // namespace

double lar(double p_ba, double p_ab) {
  if (!(p_ba > 0.0 && p_ba <= 1.0) || !(p_ab > 0.0 && p_ab <= 1.0)) {
    throw DomainError("LAR needs probabilities in (0, 1], got " + io::format_g17(p_ba) + " and " +
                      io::format_g17(p_ab));
  }
  return std::log(p_ba) - std::log(p_ab);
}

void LarMap::insert(const std::string &a, const std::string &b, double value) {
  if (!std::isfinite(value)) throw DomainError("non-finite LAR for (" + a + ";" + b + ")");
  auto rev = entries_.find({b, a});
  if (rev != entries_.end() && rev->second != -value) {
    throw DomainError("LAR(" + a + ";" + b + ") breaks antisymmetry with its reverse");
  }
  entries_[{a, b}] = value;
}

std::optional<double> LarMap::get(const std::string &a, const std::string &b) const {
  auto it = entries_.find({a, b});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

LarMap lar_map(const ConditionalTable &table, std::span<const WordPair> pairs,
               std::vector<WordPair> *skipped) {
  LarMap out(table.resource_id());
  for (const auto &[a, b] : pairs) {
    auto p_ba = table.get(a, b);
    auto p_ab = table.get(b, a);
    if (!p_ba || !p_ab) {
      if (skipped != nullptr) skipped->emplace_back(a, b);
      continue;
    }
    out.insert(a, b, lar(*p_ba, *p_ab));
  }
  return out;
}

double alar(const LarMap &lars, std::span<const WordPair> pairs) {
  if (pairs.empty()) throw PreconditionError("ALAR of an empty pair set");
  std::vector<std::string> missing;
  long double sum = 0.0L;
  for (const auto &p : pairs) {
    auto v = lars.get(p.first, p.second);
    if (!v) {
      missing.push_back(pair_label(p));
      continue;
    }
    sum += *v;
  }
  if (!missing.empty()) {
    throw CoverageError(std::to_string(missing.size()) + " pair(s) missing from LAR map " +
                            lars.resource_id(),
                        std::move(missing));
  }
  return static_cast<double>(sum / static_cast<long double>(pairs.size()));
}

double alar(const LarMap &lars, const RelationPairSet &set) { return alar(lars, set.pairs); }

std::vector<double> fractional_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the average of ranks i+1..j+1.
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  auto rx = fractional_ranks(x);
  auto ry = fractional_ranks(y);
  return rank_pearson(rx, ry);
}

double spearman_p_value_t(double rho, std::size_t n) {
  if (n <= 2) return 1.0;
  if (std::abs(rho) >= 1.0) return 0.0;
  double df = static_cast<double>(n - 2);
  double t = rho * std::sqrt(df / (1.0 - rho * rho));
  boost::math::students_t_distribution<double> dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

double spearman_p_value_exact(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  if (x.size() > 10) throw PreconditionError("exact permutation p-value needs n <= 10");
  auto rx = fractional_ranks(x);
  auto ry = fractional_ranks(y);
  double observed = std::abs(rank_pearson(rx, ry));
  std::vector<std::size_t> perm(ry.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> permuted(ry.size());
  std::size_t hits = 0;
  std::size_t total = 0;
  do {
    for (std::size_t i = 0; i < perm.size(); ++i) permuted[i] = ry[perm[i]];
    if (std::abs(rank_pearson(rx, permuted)) >= observed - 1e-12) ++hits;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

Correlation spearman_test(std::span<const double> x, std::span<const double> y) {
  Correlation c;
  c.rho = spearman(x, y);
  c.n = x.size();
  if (c.n <= 10) {
    c.p_value = spearman_p_value_exact(x, y);
    c.exact_p = true;
  } else {
    c.p_value = spearman_p_value_t(c.rho, c.n);
  }
  return c;
}

double cam(std::span<const WordPair> pairs, const LarMap &lars_i, const LarMap &lars_j) {
  std::vector<double> mi;
  std::vector<double> mj;
  align(pairs, lars_i, lars_j, mi, mj);
  return spearman(mi, mj);
}

Correlation cam_test(std::span<const WordPair> pairs, const LarMap &lars_i, const LarMap &lars_j) {
  std::vector<double> mi;
  std::vector<double> mj;
  align(pairs, lars_i, lars_j, mi, mj);
  return spearman_test(mi, mj);
}

int direction(double lar_value, double gamma) {
  if (lar_value > gamma) return 1;
  if (lar_value < -gamma) return -1;
  return 0;
}

double directional_accuracy(const LarMap &lars_data, const LarMap &lars_emb,
                            std::span<const WordPair> pairs, double gamma) {
  if (gamma < 0.0) throw PreconditionError("gamma must be non-negative");
  std::vector<double> d;
  std::vector<double> e;
  align(pairs, lars_data, lars_emb, d, e);
  if (d.empty()) throw PreconditionError("directional accuracy of an empty pair set");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (direction(d[i], gamma) == direction(e[i], gamma)) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(d.size());
}

std::vector<Bin> bin_analysis(std::vector<FactorEntry> entries,
                              const std::function<double(const WordPair &)> &accuracy_fn,
                              std::size_t bin_size) {
  if (bin_size < 1) throw PreconditionError("bin size must be >= 1");
  std::stable_sort(entries.begin(), entries.end(),
                   [](const FactorEntry &l, const FactorEntry &r) { return l.factor < r.factor; });
  std::vector<Bin> bins;
  for (std::size_t start = 0; start < entries.size(); start += bin_size) {
    std::size_t size = std::min(bin_size, entries.size() - start);
    if (size < bin_size && size * 4 < bin_size) break;
    long double factor_sum = 0.0L;
    long double acc_sum = 0.0L;
    for (std::size_t i = start; i < start + size; ++i) {
      factor_sum += entries[i].factor;
      acc_sum += accuracy_fn(entries[i].pair);
    }
    bins.push_back({static_cast<double>(factor_sum / size), static_cast<double>(acc_sum / size),
                    size});
  }
  return bins;
}

double geometric_mean_similarity(double p_ab, double p_ba) {
  if (!(p_ab >= 0.0 && p_ab <= 1.0) || !(p_ba >= 0.0 && p_ba <= 1.0)) {
    throw DomainError("similarity inputs must lie in [0, 1]");
  }
  return std::sqrt(p_ab * p_ba);
}

SimilarityResult similarity_eval(const std::map<WordPair, double> &scores,
                                 const std::map<WordPair, double> &gold) {
  SimilarityResult out;
  std::vector<double> model;
  std::vector<double> human;
  for (const auto &[pair, rating] : gold) {
    auto it = scores.find(pair);
    if (it == scores.end()) it = scores.find({pair.second, pair.first});
    if (it == scores.end()) {
      ++out.excluded;
      continue;
    }
    model.push_back(it->second);
    human.push_back(rating);
  }
  out.shared = model.size();
  if (out.shared < 2) {
    throw CoverageError("similarity evaluation needs at least two scored gold pairs, got " +
                            std::to_string(out.shared),
                        {});
  }
  out.correlation = spearman_test(model, human);
  return out;
}

std::map<WordPair, double> parse_similarity_gold(std::istream &in) {
  std::map<WordPair, double> gold;
  std::string line;
  std::size_t lineno = 0;
  while (io::read_line(in, line)) {
    ++lineno;
    if (io::trim(line).empty() || line.front() == '#') continue;
    auto fields = io::split(line, '\t');
    if (fields.size() != 3) {
      // MEN-style files separate with single spaces.
      fields = io::split(io::trim(line), ' ');
    }
    double rating = 0.0;
    if (fields.size() != 3 || !io::parse_double(io::trim(fields[2]), rating)) {
      throw ParseError("expected word1<TAB>word2<TAB>rating", lineno);
    }
    gold[{text::normalize_word(fields[0]), text::normalize_word(fields[1])}] = rating;
  }
  return gold;
}

double signed_log(double x, double scale) {
  if (x == 0.0) return 0.0;
  double m = std::log1p(std::abs(x) * scale);
  return x > 0.0 ? m : -m;
}

}  // namespace asymgauge
