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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "asymgauge/error.hpp"
#include "asymgauge/metrics.hpp"

using namespace asymgauge;

namespace {

LarMap lars_of(const std::vector<std::pair<WordPair, double>> &entries, std::string id = "r") {
  LarMap m(std::move(id));
  for (const auto &[p, v] : entries) m.insert(p.first, p.second, v);
  return m;
}

}  // namespace

TEST_CASE("lar") {
  CHECK(lar(0.3, 0.3) == 0.0);
  CHECK(std::abs(lar(0.5, 0.1) - 1.6094379124341003) < 1e-12);
  CHECK(lar(0.2, 0.7) == -lar(0.7, 0.2));
  CHECK(lar(1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(lar(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(lar(0.5, 1.5), DomainError);
  CHECK_THROWS_AS(lar(std::nan(""), 0.5), DomainError);
}

TEST_CASE("LarMap keeps antisymmetry") {
  LarMap m("d");
  m.insert("a", "b", 1.5);
  m.insert("b", "a", -1.5);
  CHECK(*m.get("b", "a") == -1.5);
  CHECK_FALSE(m.get("a", "c").has_value());
  CHECK_THROWS_AS(m.insert("b", "a", 1.0), DomainError);
  CHECK_THROWS_AS(m.insert("x", "y", std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("lar_map reads both directions from a table") {
  ConditionalTable t("e");
  t.insert("a", "b", 0.5);
  t.insert("b", "a", 0.1);
  t.insert("a", "c", 0.2);
  std::vector<WordPair> pairs = {{"a", "b"}, {"b", "a"}, {"a", "c"}};
  std::vector<WordPair> skipped;
  auto m = lar_map(t, pairs, &skipped);
  CHECK(m.resource_id() == "e");
  CHECK(std::abs(*m.get("a", "b") - std::log(5.0)) < 1e-12);
  CHECK(*m.get("b", "a") == -*m.get("a", "b"));
  CHECK(skipped == std::vector<WordPair>{{"a", "c"}});
}

TEST_CASE("alar") {
  auto m = lars_of({{{"a", "b"}, 0.7}, {{"c", "d"}, 0.7}});
  CHECK(alar(m, std::vector<WordPair>{{"a", "b"}, {"c", "d"}}) == doctest::Approx(0.7));
  auto anti = lars_of({{{"a", "b"}, 2.0}, {{"b", "a"}, -2.0}});
  CHECK(alar(anti, std::vector<WordPair>{{"a", "b"}, {"b", "a"}}) == 0.0);

  // Six pairs, spreadsheet mean 1.75 / 6.
  auto six = lars_of({{{"p", "q"}, 0.5},
                      {{"r", "s"}, -1.25},
                      {{"t", "u"}, 2.0},
                      {{"v", "w"}, 0.25},
                      {{"x", "y"}, -0.75},
                      {{"y", "z"}, 1.0}});
  RelationPairSet set{"isA", {{"p", "q"}, {"r", "s"}, {"t", "u"}, {"v", "w"}, {"x", "y"}, {"y", "z"}}};
  CHECK(std::abs(alar(six, set) - 0.29166666666666669) < 1e-15);

  CHECK_THROWS_AS(alar(six, std::vector<WordPair>{}), PreconditionError);
  try {
    alar(six, std::vector<WordPair>{{"p", "q"}, {"no", "pe"}});
    FAIL("expected CoverageError");
  } catch (const CoverageError &e) {
    CHECK(e.missing() == std::vector<std::string>{"no;pe"});
  }
}

TEST_CASE("fractional ranks") {
  std::vector<double> v = {10, 20, 20, 5, 20};
  CHECK(fractional_ranks(v) == std::vector<double>{2, 4, 4, 1, 4});
}

TEST_CASE("spearman basics") {
  std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> y = {2, 4, 8, 16, 32};
  std::vector<double> r = {5, 4, 3, 2, 1};
  CHECK(spearman(x, y) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(spearman(x, r) == doctest::Approx(-1.0).epsilon(1e-15));
  std::vector<double> tx = {1, 2, 2, 4};
  std::vector<double> ty = {3, 1, 1, 2};
  CHECK(std::abs(spearman(tx, ty) - (-1.0 / 3.0)) < 1e-15);
  std::vector<double> c = {1, 1, 1, 1, 1};
  CHECK_THROWS_AS(spearman(x, c), UndefinedCorrelationError);
  CHECK_THROWS_AS(spearman(std::vector<double>{1}, std::vector<double>{2}), DimensionError);
  CHECK_THROWS_AS(spearman(x, tx), DimensionError);
}

TEST_CASE("spearman p-values") {
  // Reference values from a statistical package (t approximation).
  CHECK(std::abs(spearman_p_value_t(0.5, 20) - 0.024769558804109703) < 1e-12);
  CHECK(std::abs(spearman_p_value_t(0.3, 50) - 0.03428618003292995) < 1e-12);
  CHECK(std::abs(spearman_p_value_t(-0.8, 12) - 0.0017818399999999966) < 1e-12);
  CHECK(spearman_p_value_t(1.0, 30) == 0.0);

  // Exact permutation values enumerated by brute force.
  std::vector<double> x5 = {1, 2, 3, 4, 5}, y5 = {1, 3, 2, 5, 4};
  CHECK(std::abs(spearman_p_value_exact(x5, y5) - 2.0 / 15.0) < 1e-15);
  std::vector<double> x6 = {1, 2, 2, 4, 5, 6}, y6 = {2, 1, 4, 3, 6, 5};
  CHECK(std::abs(spearman_p_value_exact(x6, y6) - 1.0 / 9.0) < 1e-15);
  std::vector<double> x7 = {1, 2, 3, 4, 5, 6, 7}, y7 = {7, 6, 5, 4, 3, 2, 1};
  CHECK(std::abs(spearman_p_value_exact(x7, y7) - 1.0 / 2520.0) < 1e-15);

  auto small = spearman_test(x5, y5);
  CHECK(small.exact_p);
  CHECK(small.n == 5);
  std::vector<double> big_x, big_y;
  for (int i = 0; i < 20; ++i) {
    big_x.push_back(i);
    big_y.push_back((i * 7) % 20);
  }
  auto big = spearman_test(big_x, big_y);
  CHECK_FALSE(big.exact_p);
  CHECK(big.p_value == doctest::Approx(spearman_p_value_t(big.rho, 20)));
}

TEST_CASE("cam") {
  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  LarMap i("i"), j("j"), neg("neg");
  std::vector<WordPair> pairs;
  for (int k = 0; k < 30; ++k) {
    WordPair p{"a" + std::to_string(k), "b" + std::to_string(k)};
    double v = g(rng);
    i.insert(p.first, p.second, v);
    j.insert(p.first, p.second, v + g(rng));
    neg.insert(p.first, p.second, -v);
    pairs.push_back(p);
  }
  CHECK(cam(pairs, i, i) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cam(pairs, i, neg) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(cam(pairs, i, j) == cam(pairs, j, i));

  auto dup = pairs;
  dup.push_back(pairs[0]);
  CHECK(cam(dup, i, j) == cam(pairs, i, j));

  auto missing = pairs;
  missing.push_back({"zz", "yy"});
  CHECK_THROWS_AS(cam(missing, i, j), CoverageError);

  auto t = cam_test(pairs, i, j);
  CHECK(t.n == 30);
  CHECK(t.rho == cam(pairs, i, j));
}

TEST_CASE("direction") {
  CHECK(direction(0.5, 0.1) == 1);
  CHECK(direction(-0.5, 0.1) == -1);
  CHECK(direction(0.05, 0.1) == 0);
  CHECK(direction(0.1, 0.1) == 0);
  CHECK(direction(0.0, 0.0) == 0);
  CHECK(direction(1e-300, 0.0) == 1);
}

TEST_CASE("directional accuracy") {
  auto d = lars_of({{{"a", "b"}, 2.0}, {{"c", "d"}, -0.05}, {{"e", "f"}, 0.5}});
  auto e = lars_of({{{"a", "b"}, 0.5}, {{"c", "d"}, 0.05}, {{"e", "f"}, -3.0}});
  std::vector<WordPair> s = {{"a", "b"}, {"c", "d"}, {"e", "f"}};
  CHECK(directional_accuracy(d, d, s, 0.0) == 1.0);
  CHECK(directional_accuracy(d, e, s, 0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(directional_accuracy(d, e, s, 0.1) == doctest::Approx(2.0 / 3.0));
  CHECK(directional_accuracy(d, e, s, 100.0) == 1.0);
  CHECK_THROWS_AS(directional_accuracy(d, e, std::vector<WordPair>{}, 0.0), PreconditionError);
}

TEST_CASE("bin analysis") {
  std::vector<FactorEntry> four_hundred;
  for (int i = 0; i < 400; ++i) four_hundred.push_back({{"w" + std::to_string(i), "x"}, double(i)});
  auto bins = bin_analysis(four_hundred, [](const WordPair &) { return 1.0; }, 200);
  REQUIRE(bins.size() == 2);
  CHECK(bins[0].size == 200);

  // 450 shuffled factors k / 10; accuracy is 1 when k is a multiple of 3.
  // Spreadsheet grouping: means 9.95, 29.95, 42.45; accuracies 67/200,
  // 67/200, 16/50.
  std::vector<FactorEntry> entries;
  for (int i = 0; i < 450; ++i) {
    int k = (i * 7919) % 450;
    entries.push_back({{std::to_string(k), "x"}, k / 10.0});
  }
  auto acc = [](const WordPair &p) { return std::stoi(p.first) % 3 == 0 ? 1.0 : 0.0; };
  bins = bin_analysis(entries, acc, 200);
  REQUIRE(bins.size() == 3);
  CHECK(bins[0].mean_factor == doctest::Approx(9.95).epsilon(1e-12));
  CHECK(bins[1].mean_factor == doctest::Approx(29.95).epsilon(1e-12));
  CHECK(bins[2].mean_factor == doctest::Approx(42.45).epsilon(1e-12));
  CHECK(bins[0].accuracy == doctest::Approx(0.335));
  CHECK(bins[1].accuracy == doctest::Approx(0.335));
  CHECK(bins[2].accuracy == doctest::Approx(0.32));
  CHECK(bins[2].size == 50);

  // A trailing bin under a quarter of bin_size is dropped.
  entries.resize(440);
  auto shortened = bin_analysis(entries, acc, 200);
  CHECK(shortened.size() == 2);

  // Equal factors keep input order.
  std::vector<FactorEntry> ties;
  for (int i = 0; i < 6; ++i) ties.push_back({{std::to_string(i), "x"}, 1.0});
  auto tied = bin_analysis(ties, [](const WordPair &p) { return std::stoi(p.first) < 3 ? 1.0 : 0.0; }, 3);
  REQUIRE(tied.size() == 2);
  CHECK(tied[0].accuracy == 1.0);
  CHECK(tied[1].accuracy == 0.0);
}

TEST_CASE("geometric mean similarity") {
  CHECK(geometric_mean_similarity(0.3, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(geometric_mean_similarity(0.0, 0.7) == 0.0);
  CHECK(std::abs(geometric_mean_similarity(0.04, 0.25) - 0.1) < 1e-12);
  CHECK_THROWS_AS(geometric_mean_similarity(-0.1, 0.5), DomainError);
}

TEST_CASE("similarity evaluation") {
  const std::vector<double> gold_r = {12, 45, 33, 8,  27, 27, 50, 3,  19, 40,
                                      22, 36, 14, 9,  31, 44, 5,  27, 18, 38};
  const std::vector<double> model = {0.21, 0.80, 0.55, 0.10, 0.47, 0.33, 0.91,
                                     0.05, 0.30, 0.62, 0.30, 0.71, 0.26, 0.12,
                                     0.58, 0.77, 0.08, 0.47, 0.35, 0.60};
  std::map<WordPair, double> gold, scores;
  for (int i = 0; i < 20; ++i) {
    WordPair p{"g" + std::to_string(i), "h" + std::to_string(i)};
    gold[p] = gold_r[i];
    // Odd rows are stored in the reverse order.
    scores[i % 2 ? WordPair{p.second, p.first} : p] = model[i];
  }
  auto r = similarity_eval(scores, gold);
  CHECK(r.shared == 20);
  CHECK(r.excluded == 0);
  CHECK(std::abs(r.correlation.rho - 0.9819143707425202) < 1e-12);
  CHECK(r.correlation.p_value == doctest::Approx(1.8414674498240416e-14).epsilon(1e-6));

  scores.erase({"h7", "g7"});
  scores.erase({"g7", "h7"});
  r = similarity_eval(scores, gold);
  CHECK(r.shared == 19);
  CHECK(r.excluded == 1);
  CHECK(std::abs(r.correlation.rho - 0.9788921991834538) < 1e-12);

  CHECK(similarity_eval(gold, gold).correlation.rho == doctest::Approx(1.0));
  CHECK_THROWS_AS(similarity_eval({}, gold), CoverageError);
}

TEST_CASE("similarity gold parsing") {
  std::istringstream in("# comment\nCat dog 7.5\nsun\tmoon\t3\n\n");
  auto g = parse_similarity_gold(in);
  CHECK(g.size() == 2);
  CHECK(g.at({"cat", "dog"}) == 7.5);
  CHECK(g.at({"sun", "moon"}) == 3.0);
  std::istringstream bad("cat dog\n");
  CHECK_THROWS_AS(parse_similarity_gold(bad), ParseError);
}

TEST_CASE("signed log") {
  CHECK(signed_log(0.0) == 0.0);
  CHECK(signed_log(-2.0) == -signed_log(2.0));
  CHECK(std::abs(signed_log(std::exp(1.0) - 1.0) - 1.0) < 1e-15);
  CHECK(std::abs(signed_log(0.5, 10.0) - std::log(6.0)) < 1e-15);
}
