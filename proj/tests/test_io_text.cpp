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

#include "asymgauge/error.hpp"
#include "asymgauge/io.hpp"
#include "asymgauge/text.hpp"
#include "test_support.hpp"

using namespace asymgauge;
using asymgauge::testing::TempDir;

TEST_CASE("split and trim") {
  auto parts = io::split("a\t\tb\t", '\t');
  REQUIRE(parts.size() == 4);
  CHECK(parts[0] == "a");
  CHECK(parts[1].empty());
  CHECK(parts[2] == "b");
  CHECK(parts[3].empty());
  CHECK(io::trim("  x y \t\r") == "x y");
  CHECK(io::trim("   ").empty());
}

TEST_CASE("read_line drops CR and reports EOF") {
  std::istringstream in("one\r\ntwo\nthree");
  std::string line;
  REQUIRE(io::read_line(in, line));
  CHECK(line == "one");
  REQUIRE(io::read_line(in, line));
  CHECK(line == "two");
  REQUIRE(io::read_line(in, line));
  CHECK(line == "three");
  CHECK_FALSE(io::read_line(in, line));
}

TEST_CASE("format_g17 round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-12, 6.02214076e23, -2.5, 0.0}) {
    double back = std::strtod(io::format_g17(v).c_str(), nullptr);
    CHECK(back == v);
  }
  CHECK(io::format_fixed(1.23456, 2) == "1.23");
}

TEST_CASE("number parsing spans the whole field") {
  long long i = 0;
  CHECK(io::parse_int("42", i));
  CHECK(i == 42);
  CHECK(io::parse_int("-7", i));
  CHECK(i == -7);
  CHECK_FALSE(io::parse_int("4x", i));
  CHECK_FALSE(io::parse_int("", i));
  double d = 0;
  CHECK(io::parse_double("2.5e-3", d));
  CHECK(d == 0.0025);
  CHECK_FALSE(io::parse_double("1.0abc", d));
  CHECK_FALSE(io::parse_double("inf", d));
  CHECK_FALSE(io::parse_double("nan", d));
}

TEST_CASE("fnv1a64 and crc32 known values") {
  CHECK(io::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(io::hex64(0xabcULL) == "0000000000000abc");
  TempDir dir;
  testing::spit(dir / "check.txt", "123456789");
  CHECK(io::file_checksum(dir / "check.txt") == "cbf43926");
}

TEST_CASE("write_file_atomic replaces contents") {
  TempDir dir;
  auto p = dir / "out.txt";
  io::write_file_atomic(p, "first");
  io::write_file_atomic(p, "second");
  CHECK(io::read_file(p) == "second");
  for (const auto &e : std::filesystem::directory_iterator(dir.path())) {
    CHECK(e.path().filename() == "out.txt");
  }
}

TEST_CASE("open_input reads gzip and plain files") {
  auto in = io::open_input(testing::data_dir() / "synthetic" / "swow.csv.gz");
  std::string line;
  REQUIRE(io::read_line(*in, line));
  CHECK(line == "id,participantID,cue,R1,R2,R3");
  TempDir dir;
  testing::spit(dir / "plain.txt", "hello\n");
  auto plain = io::open_input(dir / "plain.txt");
  REQUIRE(io::read_line(*plain, line));
  CHECK(line == "hello");
  CHECK_THROWS_AS(io::open_input(dir / "missing.txt"), IoError);
}

TEST_CASE("utf8 validation") {
  CHECK(text::valid_utf8("caf\xc3\xa9"));
  CHECK(text::valid_utf8("\xe2\x82\xac"));
  CHECK_FALSE(text::valid_utf8("\xc0\xaf"));          // overlong
  CHECK_FALSE(text::valid_utf8("\xed\xa0\x80"));      // surrogate
  CHECK_FALSE(text::valid_utf8("\xe2\x82"));          // truncated
  CHECK_FALSE(text::valid_utf8("\xf4\x90\x80\x80"));  // above U+10FFFF
}

TEST_CASE("case folding and normalization") {
  CHECK(text::to_lower("DoG") == "dog");
  CHECK(text::to_lower("\xc3\x80\xc3\x89") == "\xc3\xa0\xc3\xa9");  // ÀÉ -> àé
  CHECK(text::normalize_word("  Ice \t Cream ") == "ice_cream");
  CHECK(text::is_normalized_word("ice_cream"));
  CHECK_FALSE(text::is_normalized_word("Ice"));
  CHECK_FALSE(text::is_normalized_word("a b"));
  CHECK_FALSE(text::is_normalized_word(""));
}

TEST_CASE("code point offsets") {
  std::string s = "caf\xc3\xa9 au lait";  // café au lait
  CHECK(text::count_code_points(s) == 12);
  CHECK(text::code_point_index(s, 6) == 5);
  CHECK(text::byte_offset(s, 5) == 6);
  CHECK(text::byte_offset(s, 100) == s.size());
  for (std::size_t cp = 0; cp <= 12; ++cp) {
    CHECK(text::code_point_index(s, text::byte_offset(s, cp)) == cp);
  }
}

namespace {
std::vector<std::string> tokens(const std::string &s) {
  std::vector<std::string> out;
  for (auto t : text::tokenize(s)) out.push_back(s.substr(t.offset, t.length));
  return out;
}
}  // namespace

TEST_CASE("tokenizer") {
  CHECK(tokens("The cat sat.") == std::vector<std::string>{"The", "cat", "sat"});
  CHECK(tokens("Don't stop-it -now' 'x") ==
        std::vector<std::string>{"Don't", "stop-it", "now", "x"});
  CHECK(tokens("caf\xc3\xa9, na\xc3\xafve!") ==
        std::vector<std::string>{"caf\xc3\xa9", "na\xc3\xafve"});
  // Curly quotes and em dashes are punctuation, not word characters.
  CHECK(tokens("\xe2\x80\x9cword\xe2\x80\x9d\xe2\x80\x94next") ==
        std::vector<std::string>{"word", "next"});
  CHECK(tokens("a--b") == std::vector<std::string>{"a", "b"});
  CHECK(tokens("x2 42").size() == 2);
  CHECK(tokens("").empty());
}
