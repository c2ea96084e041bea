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

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "asymgauge/error.hpp"
#include "asymgauge/lm_conditionals.hpp"
#include "test_support.hpp"

using namespace asymgauge;

namespace {

ParagraphStore small_store() {
  return ParagraphStore::build({{"d0",
                                 "the cat saw a dog\n\n"
                                 "dog and dog chased cat\n\n"
                                 "no pets here\n\n"
                                 "a cat alone\n\n"
                                 "fish swim\n\n"
                                 "a bird and a cat\n\n"
                                 "bird bird dog"}});
}

// Context record built by hand; offsets are bytes into `text`.
ContextRecord context(std::uint32_t paragraph, std::vector<std::uint32_t> a_offsets,
                      std::vector<std::uint32_t> b_offsets) {
  ContextRecord c;
  c.paragraph = paragraph;
  c.text = std::string(64, 'x');
  c.a_offsets = std::move(a_offsets);
  c.b_offsets = std::move(b_offsets);
  return c;
}

std::vector<ScoreResult> constant_results(const std::vector<ScoringTask> &tasks,
                                          double ba, double ab) {
  std::vector<ScoreResult> out;
  for (const auto &t : tasks) {
    out.push_back({t.task_id, t.direction == Direction::kBGivenA ? ba : ab, "m"});
  }
  return out;
}

// Fails every call after the first `ok_calls`.
class FlakyChannel : public ScoringChannel {
 public:
  explicit FlakyChannel(int ok_calls) : left_(ok_calls) {}
  std::vector<WireResponse> score(const std::vector<WireRequest> &batch) override {
    if (left_-- <= 0) throw ScorerChannelError("scorer went away");
    return inner_.score(batch);
  }
  std::string model_id() const override { return "mock"; }
  int calls_left() const { return left_; }

 private:
  MockScorer inner_;
  int left_;
};

class ZeroChannel : public ScoringChannel {
 public:
  std::vector<WireResponse> score(const std::vector<WireRequest> &batch) override {
    std::vector<WireResponse> out;
    for (const auto &r : batch) out.push_back({r.id, 0.0, ""});
    return out;
  }
  std::string model_id() const override { return "zero"; }
};

const std::vector<WordPair> kPairs = {{"cat", "dog"}, {"bird", "cat"}, {"cat", "fish"},
                                      {"bird", "dog"}, {"dog", "cat"},  {"and", "cat"}};

}  // namespace

TEST_CASE("task ids and enumeration order") {
  WordPair pair{"dog", "cat"};
  CHECK(task_id(pair, 3, 17, Direction::kBGivenA) == "dog|cat|3|17|ba");
  CHECK(task_id(pair, 3, 17, Direction::kAGivenB) == "dog|cat|3|17|ab");
  auto tasks = emit_tasks({context(0, {0}, {10, 20}), context(4, {2, 30}, {8})}, pair);
  REQUIRE(tasks.size() == 6);
  CHECK(tasks[0].task_id == "dog|cat|0|10|ba");
  CHECK(tasks[0].target_word == "cat");
  CHECK(tasks[2].direction == Direction::kAGivenB);
  CHECK(tasks[2].target_word == "dog");
  CHECK(tasks[3].task_id == "dog|cat|4|8|ba");
  CHECK(tasks[5].weight_a == 2);
  CHECK(tasks[5].weight_b == 1);
}

TEST_CASE("wire requests count code points") {
  ScoringTask t;
  t.task_id = "x";
  t.context_text = "caf\xc3\xa9 \xc3\xa9t\xc3\xa9";
  t.mask_offset = 6;
  t.target_word = "\xc3\xa9t\xc3\xa9";
  auto r = t.to_request();
  CHECK(r.offset == 5);
  CHECK(r.length == 3);
}

TEST_CASE("single context at probability 1/4") {
  WordPair pair{"a", "b"};
  auto tasks = emit_tasks({context(0, {0}, {5})}, pair);
  auto e = aggregate(constant_results(tasks, 0.25, 0.5), tasks, 1, 1, 1, 1);
  CHECK(e.p_b_given_a == 0.25);
  CHECK(e.p_a_given_b == 0.5);
  CHECK(e.n_contexts_used == 1);
}

TEST_CASE("weights scale each context") {
  // |C(a)| = 3: weights 2 and 1 with probabilities 0.3 and 0.6 give 0.4.
  WordPair pair{"a", "b"};
  auto tasks = emit_tasks({context(0, {0, 9}, {5}), context(1, {0}, {5})}, pair);
  std::vector<ScoreResult> results;
  for (const auto &t : tasks) {
    double p = t.direction == Direction::kAGivenB ? 0.5 : (t.paragraph == 0 ? 0.3 : 0.6);
    results.push_back({t.task_id, p, "m"});
  }
  auto e = aggregate(results, tasks, 3, 2, 2, 2);
  CHECK(std::abs(e.p_b_given_a - 0.4) < 1e-15);
  CHECK(e.p_a_given_b == 0.5);
  CHECK(e.sum_weight_a == 3);
  CHECK(e.sum_weight_b == 2);
}

TEST_CASE("extrapolation from a sample and clamping") {
  WordPair pair{"a", "b"};
  auto tasks = emit_tasks({context(0, {0}, {5}), context(7, {0}, {5})}, pair);
  // P / n = 10 / 2 scales the sampled sum.
  auto e = aggregate(constant_results(tasks, 0.01, 0.02), tasks, 100, 100, 10, 2);
  CHECK(std::abs(e.p_b_given_a - 0.001) < 1e-15);
  auto big = aggregate(constant_results(tasks, 0.9, 0.9), tasks, 2, 2, 10, 2);
  CHECK(big.p_b_given_a == 1.0);
}

TEST_CASE("mean and sum combine the masked occurrences of a context") {
  WordPair pair{"a", "b"};
  auto tasks = emit_tasks({context(0, {0}, {3, 9})}, pair);
  std::vector<ScoreResult> results;
  for (const auto &t : tasks) {
    results.push_back({t.task_id, t.mask_offset == 3 ? 0.2 : (t.mask_offset == 9 ? 0.4 : 1.0), "m"});
  }
  CHECK(std::abs(aggregate(results, tasks, 1, 2, 1, 1, Combine::kMean).p_b_given_a - 0.3) < 1e-15);
  CHECK(std::abs(aggregate(results, tasks, 1, 2, 1, 1, Combine::kSum).p_b_given_a - 0.6) < 1e-15);
}

TEST_CASE("aggregate argument errors") {
  WordPair pair{"a", "b"};
  auto tasks = emit_tasks({context(0, {0}, {5})}, pair);
  auto good = constant_results(tasks, 0.5, 0.5);
  CHECK_THROWS_AS(aggregate(good, tasks, 1, 1, 0, 1), PreconditionError);
  CHECK_THROWS_AS(aggregate(good, tasks, 1, 1, 1, 0), PreconditionError);
  CHECK_THROWS_AS(aggregate(good, tasks, 1, 1, 1, 2), PreconditionError);

  std::vector<ScoreResult> partial(good.begin(), good.begin() + 1);
  try {
    aggregate(partial, tasks, 1, 1, 1, 1);
    FAIL("expected IncompleteBatchError");
  } catch (const IncompleteBatchError &e) {
    CHECK(e.task_ids() == std::vector<std::string>{tasks[1].task_id});
  }

  auto bad = good;
  bad[0].probability = 1.5;
  CHECK_THROWS_AS(aggregate(bad, tasks, 1, 1, 1, 1), ProtocolError);
  auto unknown = good;
  unknown.push_back({"a|b|9|9|ba", 0.5, "m"});
  CHECK_THROWS_AS(aggregate(unknown, tasks, 1, 1, 1, 1), ProtocolError);
}

TEST_CASE("permutation of results does not change the estimate") {
  WordPair pair{"a", "b"};
  std::vector<ContextRecord> cs;
  for (std::uint32_t i = 0; i < 12; ++i) cs.push_back(context(i, {0, 20}, {5, 13, 40}));
  auto tasks = emit_tasks(cs, pair);
  std::vector<ScoreResult> results;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    results.push_back({tasks[i].task_id, 1.0 / (3.0 + static_cast<double>(i % 11)), "m"});
  }
  auto base = aggregate(results, tasks, 40, 50, 30, 12);
  std::reverse(results.begin(), results.end());
  CHECK(aggregate(results, tasks, 40, 50, 30, 12) == base);
  std::rotate(results.begin(), results.begin() + 7, results.end());
  CHECK(aggregate(results, tasks, 40, 50, 30, 12) == base);
}

TEST_CASE("mock run matches the hand-computed closed form") {
  // cat/dog co-occur in paragraphs 0 and 1. |C(cat)| = 4, |C(dog)| = 4.
  //   P(dog|cat) = (1 * 1 + 1 * mean(1, 1/2)) / 4 = 7/16
  //   P(cat|dog) = (1 * 1/5 + 2 * 1/6) / 4 = 2/15
  auto store = small_store();
  MockScorer mock;
  LmRunOptions options;
  auto r = lm_conditional_table(kPairs, store, mock, "mock", options);
  CHECK(std::abs(*r.table.get("cat", "dog") - 7.0 / 16.0) < 1e-12);
  CHECK(std::abs(*r.table.get("dog", "cat") - 2.0 / 15.0) < 1e-12);
  CHECK_FALSE(r.table.contains("cat", "fish"));

  auto fish = std::find_if(r.factors.begin(), r.factors.end(),
                           [](const FactorRecord &f) { return f.pair == WordPair{"cat", "fish"}; });
  REQUIRE(fish != r.factors.end());
  CHECK(fish->population == 0);
  CHECK(r.dropped.empty());
  CHECK(r.estimates.size() == 4);
  CHECK(std::is_sorted(r.estimates.begin(), r.estimates.end(),
                       [](const auto &x, const auto &y) { return x.pair < y.pair; }));

  options.combine = Combine::kSum;
  auto s = lm_conditional_table(kPairs, store, mock, "mock", options);
  CHECK(std::abs(*s.table.get("cat", "dog") - 5.0 / 8.0) < 1e-12);
}

TEST_CASE("refusals drop the pair") {
  auto store = small_store();
  MockScorer mock({"bird"});
  auto r = lm_conditional_table(kPairs, store, mock, "mock", {});
  CHECK(r.dropped.size() == 2);
  CHECK(r.dropped[0].reason == "multi-token-target");
  CHECK_FALSE(r.table.contains("bird", "cat"));
  CHECK(r.table.contains("cat", "dog"));
}

TEST_CASE("zero estimates are floored") {
  auto store = small_store();
  ZeroChannel zero;
  auto r = lm_conditional_table(kPairs, store, zero, "zero", {});
  CHECK(*r.table.get("cat", "dog") == 1e-12);
}

TEST_CASE("channel failures exhaust retries") {
  auto store = small_store();
  FlakyChannel flaky(0);
  LmRunOptions options;
  options.retries = 2;
  CHECK_THROWS_AS(lm_conditional_table(kPairs, store, flaky, "mock", options), ScorerChannelError);
  CHECK(flaky.calls_left() == -3);
}

TEST_CASE("checkpoint resume, torn tail and stale key") {
  testing::TempDir dir;
  auto store = small_store();
  MockScorer mock;
  LmRunOptions plain;
  plain.batch_pairs = 1;
  auto reference = lm_conditional_table(kPairs, store, mock, "mock", plain);

  LmRunOptions options = plain;
  options.checkpoint = dir / "ck.tsv";
  options.config_hash = "h1";
  options.retries = 0;
  FlakyChannel flaky(2);
  CHECK_THROWS_AS(lm_conditional_table(kPairs, store, flaky, "mock", options), ScorerChannelError);
  REQUIRE(std::filesystem::exists(options.checkpoint));
  auto partial = testing::slurp(options.checkpoint);
  CHECK(partial.find("# run_key") != std::string::npos);

  // A torn final line is redone.
  testing::spit(options.checkpoint, partial + "cat\tdog\tok\t2");
  FlakyChannel rest(100);
  auto resumed = lm_conditional_table(kPairs, store, rest, "mock", options);
  CHECK(resumed.table == reference.table);
  CHECK(resumed.estimates == reference.estimates);
  CHECK(factors_to_tsv(resumed.factors) == factors_to_tsv(reference.factors));
  // Two pairs came from the checkpoint, so fewer scorer calls were needed.
  CHECK(rest.calls_left() == 100 - 2);

  LmRunOptions other = options;
  other.config_hash = "h2";
  CHECK_THROWS_AS(lm_conditional_table(kPairs, store, mock, "mock", other), StaleCheckpointError);
  other = options;
  other.cap = 1;
  CHECK_THROWS_AS(lm_conditional_table(kPairs, store, mock, "mock", other), StaleCheckpointError);
}

TEST_CASE("task file lists every request") {
  auto store = small_store();
  std::ostringstream out;
  auto n = write_task_file(kPairs, store, {}, out);
  std::istringstream in(out.str());
  std::string line;
  std::size_t lines = 0;
  MockScorer mock;
  std::map<std::string, WireResponse> responses;
  while (std::getline(in, line)) {
    auto r = mock.score_one(decode_request(line));
    responses[r.id] = r;
    ++lines;
  }
  CHECK(lines == n);
  CHECK(n > 0);

  ResultFileChannel offline(responses, "mock");
  auto a = lm_conditional_table(kPairs, store, offline, "mock", {});
  auto b = lm_conditional_table(kPairs, store, mock, "mock", {});
  CHECK(a.table == b.table);
}

TEST_CASE("pair seeds and unordered pairs") {
  CHECK(pair_seed(1, {"a", "b"}) == pair_seed(1, {"a", "b"}));
  CHECK(pair_seed(1, {"a", "b"}) != pair_seed(2, {"a", "b"}));
  CHECK(pair_seed(1, {"a", "b"}) != pair_seed(1, {"b", "a"}));
  CHECK(unordered_pairs(kPairs) == std::vector<WordPair>{{"cat", "dog"},
                                                        {"bird", "cat"},
                                                        {"cat", "fish"},
                                                        {"bird", "dog"},
                                                        {"and", "cat"}});
}

TEST_CASE("factor TSV round-trip") {
  std::vector<FactorRecord> f = {{{"a", "b"}, 12, 3.25}, {{"c", "d"}, 0, 0.0}};
  std::istringstream in("# header\n" + factors_to_tsv(f));
  auto back = parse_factors_tsv(in);
  REQUIRE(back.size() == 2);
  CHECK(back[0].population == 12);
  CHECK(back[0].mean_char_distance == 3.25);
  std::istringstream bad("a\tb\t-1\t0\n");
  CHECK_THROWS_AS(parse_factors_tsv(bad), ParseError);
}
