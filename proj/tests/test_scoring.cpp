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
#include <sstream>

#include "asymgauge/error.hpp"
#include "asymgauge/scoring.hpp"

using namespace asymgauge;

namespace {

WireRequest request(std::string id, std::string text, std::size_t offset, std::size_t length,
                    std::string target) {
  return {std::move(id), std::move(text), offset, length, std::move(target)};
}

}  // namespace

TEST_CASE("request and response round-trip") {
  auto r = request("dog|cat|3|10|ba", "the caf\xc3\xa9 \"cat\"\n", 4, 4, "caf\xc3\xa9");
  CHECK(decode_request(encode_request(r)) == r);
  WireResponse p{"x", 0.125, ""};
  CHECK(decode_response(encode_response(p)) == p);
  WireResponse refusal{"y", std::nullopt, "multi-token-target"};
  CHECK(decode_response(encode_response(refusal)) == refusal);
  CHECK(decode_response(encode_response(refusal)).is_refusal());
  WireResponse cut{"z", 0.5, "", true};
  CHECK(encode_response(cut) == R"({"id":"z","prob":0.5,"truncated":true})");
  CHECK(decode_response(encode_response(cut)) == cut);
  CHECK_FALSE(decode_response(R"({"id": "z", "prob": 0.5, "truncated": false})").truncated);
}

TEST_CASE("malformed protocol lines") {
  CHECK_THROWS_AS(decode_response("not json"), ProtocolError);
  CHECK_THROWS_AS(decode_response("[1, 2]"), ProtocolError);
  CHECK_THROWS_AS(decode_response(R"({"prob": 0.5})"), ProtocolError);
  CHECK_THROWS_AS(decode_response(R"({"id": "a"})"), ProtocolError);
  CHECK_THROWS_AS(decode_response(R"({"id": "a", "prob": 1.5})"), ProtocolError);
  CHECK_THROWS_AS(decode_response(R"({"id": "a", "prob": -0.1})"), ProtocolError);
  CHECK_THROWS_AS(decode_response(R"({"id": "a", "prob": "0.5"})"), ProtocolError);
  CHECK_THROWS_AS(decode_request(R"({"id": "a", "text": "t", "offset": -1, "length": 1, "target": "t"})"),
                  ProtocolError);
  CHECK_THROWS_AS(decode_request(R"({"id": "a", "text": "t", "offset": 0, "length": 1})"), ProtocolError);
  CHECK_THROWS_AS(decode_response(R"({"id": "a", "prob": 0.5, "truncated": 1})"), ProtocolError);
  CHECK(decode_response(R"({"id": "a", "prob": 0})").prob == 0.0);
  CHECK(decode_response(R"({"id": "a", "prob": 1})").prob == 1.0);
}

TEST_CASE("mock scorer closed form") {
  MockScorer mock;
  std::string text = "a dog and a dog and a dog and a dog";
  for (std::size_t offset : {2, 12, 22, 32}) {
    auto r = mock.score_one(request("t", text, offset, 3, "dog"));
    REQUIRE_FALSE(r.is_refusal());
    CHECK(*r.prob == 1.0 / (1.0 + static_cast<double>(offset % 7)));
  }
  // Offsets count code points, not bytes.
  auto u = mock.score_one(request("u", "\xc3\xa9t\xc3\xa9 dog", 4, 3, "dog"));
  CHECK(*u.prob == MockScorer::closed_form(4));
}

TEST_CASE("mock scorer refusals") {
  MockScorer mock({"ice_cream"});
  auto bad = mock.score_one(request("t", "a dog", 0, 3, "dog"));
  CHECK(bad.refused == "offset-mismatch");
  auto refused = mock.score_one(request("t", "ice_cream", 0, 9, "ice_cream"));
  CHECK(refused.refused == "multi-token-target");
  auto batch = mock.score({request("1", "dog", 0, 3, "dog"), request("2", "x", 0, 1, "y")});
  CHECK(batch.size() == 2);
  CHECK(mock.model_id() == "mock");
}

TEST_CASE("serve answers each batch and closes it with a blank line") {
  MockScorer mock;
  std::string in_text = encode_request(request("a", "dog", 0, 3, "dog")) + "\n" +
                        encode_request(request("b", "x dog", 2, 3, "dog")) + "\n\n" +
                        encode_request(request("c", "x", 0, 1, "x")) + "\n";
  std::istringstream in(in_text);
  std::ostringstream out;
  serve(mock, in, out);
  std::istringstream back(out.str());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(back, line)) lines.push_back(line);
  REQUIRE(lines.size() == 5);
  CHECK(lines[2].empty());
  CHECK(lines[4].empty());
  CHECK(decode_response(lines[1]).prob == 1.0 / 3.0);
  CHECK(decode_response(lines[3]).id == "c");
}

TEST_CASE("result file responses") {
  std::istringstream in("{\"id\": \"a\", \"prob\": 0.5}\n\n{\"id\": \"b\", \"refused\": \"r\"}\n"
                        "{\"id\": \"a\", \"prob\": 0.5}\n");
  auto responses = read_responses(in);
  CHECK(responses.size() == 2);
  CHECK(responses.at("b").is_refusal());

  std::istringstream conflict("{\"id\": \"a\", \"prob\": 0.5}\n{\"id\": \"a\", \"prob\": 0.25}\n");
  CHECK_THROWS_AS(read_responses(conflict), ProtocolError);
  std::istringstream garbage("{\"id\": \"a\", \"prob\": 0.5}\nnope\n");
  CHECK_THROWS_WITH_AS(read_responses(garbage), doctest::Contains("line 2"), ProtocolError);

  ResultFileChannel channel(responses, "offline");
  auto got = channel.score({request("a", "t", 0, 1, "t"), request("zz", "t", 0, 1, "t")});
  REQUIRE(got.size() == 1);
  CHECK(got[0].id == "a");
}

TEST_CASE("process scorer speaks the protocol to a child") {
  ProcessScorer scorer(std::string(ASYMGAUGE_MOCK_SCORER) + " refused_word", "proc");
  MockScorer local({"refused_word"});
  std::vector<WireRequest> batch;
  for (int i = 0; i < 200; ++i) {
    std::string text = std::string(static_cast<std::size_t>(i), 'x') + " dog";
    batch.push_back(request("t" + std::to_string(i), text, static_cast<std::size_t>(i) + 1, 3, "dog"));
  }
  batch.push_back(request("r", "refused_word", 0, 12, "refused_word"));
  for (int round = 0; round < 2; ++round) {
    auto got = scorer.score(batch);
    REQUIRE(got.size() == batch.size());
    auto expected = local.score(batch);
    auto by_id = [](const WireResponse &a, const WireResponse &b) { return a.id < b.id; };
    std::sort(got.begin(), got.end(), by_id);
    std::sort(expected.begin(), expected.end(), by_id);
    CHECK(got == expected);
  }
  scorer.reset();
  CHECK(scorer.score({batch[0]}).size() == 1);
}

TEST_CASE("process scorer failures") {
  ProcessScorer dead("exit 0", "dead");
  CHECK_THROWS_AS(dead.score({request("a", "dog", 0, 3, "dog")}), ScorerChannelError);
  ProcessScorer liar("read x; echo '{\"id\": \"other\", \"prob\": 0.5}'", "liar");
  CHECK_THROWS_AS(liar.score({request("a", "dog", 0, 3, "dog")}), ProtocolError);
}
