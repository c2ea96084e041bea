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
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace asymgauge {

struct Document {
  std::string id;
  std::string text;
};

// Reads every `*.txt` file of a directory (sorted by file name), or a single
// stream with '\f' separating documents.
std::vector<Document> load_corpus_directory(const std::filesystem::path &dir);
std::vector<Document> load_corpus_stream(std::istream &in, std::string_view id_prefix = "doc");
std::vector<Document> load_corpus(const std::filesystem::path &path);

struct Paragraph {
  std::string doc_id;
  std::uint32_t para_index = 0;
  std::string text;

  friend bool operator==(const Paragraph &, const Paragraph &) = default;
};

// Postings of one word: ascending paragraph ordinals, and for each the byte
// offsets of the word's occurrences, flattened. Occurrence count k of the
// i-th paragraph is offsets_start[i + 1] - offsets_start[i].
struct PostingList {
  std::vector<std::uint32_t> paragraphs;
  std::vector<std::uint32_t> offsets_start{0};
  std::vector<std::uint32_t> offsets;

  std::size_t size() const noexcept { return paragraphs.size(); }
  std::uint32_t occurrences(std::size_t i) const {
    return offsets_start[i + 1] - offsets_start[i];
  }

  friend bool operator==(const PostingList &, const PostingList &) = default;
};

// One co-occurrence context for a pair (a, b).
struct ContextRecord {
  std::uint32_t paragraph = 0;
  std::string text;
  std::vector<std::uint32_t> a_offsets;  // byte offsets into `text`
  std::vector<std::uint32_t> b_offsets;
  // Nearest |offset_a - offset_b| over all occurrence pairs, in code points.
  std::uint32_t min_char_distance = 0;

  std::uint32_t weight_a() const noexcept { return static_cast<std::uint32_t>(a_offsets.size()); }
  std::uint32_t weight_b() const noexcept { return static_cast<std::uint32_t>(b_offsets.size()); }
};

struct ContextSample {
  std::size_t population = 0;  // paragraphs where both words occur
  std::vector<ContextRecord> records;  // ascending paragraph ordinal
};

struct IndexOptions {
  // Paragraphs longer than this many code points are cut at the last
  // sentence end before the limit.
  std::size_t max_paragraph_chars = 10000;
  unsigned threads = 1;
};

struct IndexStats {
  std::size_t documents = 0;
  std::size_t skipped_documents = 0;  // invalid UTF-8
  std::size_t truncated_paragraphs = 0;

  friend bool operator==(const IndexStats &, const IndexStats &) = default;
};

// Paragraph-level inverted index. Paragraphs are blank-line delimited
// blocks; posting keys are lowercased tokens. Immutable once built, so
// concurrent readers need no locking.
class ParagraphStore {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  static ParagraphStore build(const std::vector<Document> &docs, const IndexOptions &options = {});

  std::size_t size() const noexcept { return paragraphs_.size(); }
  const Paragraph &paragraph(std::size_t ordinal) const { return paragraphs_.at(ordinal); }
  const IndexStats &stats() const noexcept { return stats_; }
  std::size_t vocabulary_size() const noexcept { return postings_.size(); }

  // nullptr when the word never occurs.
  const PostingList *postings(const std::string &word) const;

  // |C(word)|: occurrences summed over the paragraphs containing the word.
  std::uint64_t context_count(const std::string &word) const;

  // Paragraphs containing both words. When more than `cap` exist, a uniform
  // sample of `cap` without replacement is drawn; equal seeds give equal
  // samples on every platform. Returns an empty sample for a == b.
  ContextSample contexts_for_pair(const std::string &a, const std::string &b, std::size_t cap,
                                  std::uint64_t seed) const;

  // Number of paragraphs containing both words.
  std::size_t co_occurrence_count(const std::string &a, const std::string &b) const;

  void save(const std::filesystem::path &path) const;
  static ParagraphStore load(const std::filesystem::path &path);

  friend bool operator==(const ParagraphStore &, const ParagraphStore &) = default;

 private:
  std::vector<Paragraph> paragraphs_;
  std::unordered_map<std::string, PostingList> postings_;
  IndexStats stats_;
};

// Splits a document into blank-line separated paragraphs (lines joined by
// '\n', surrounding blank lines dropped).
std::vector<std::string> split_paragraphs(std::string_view document);

// Cuts `paragraph` to at most `max_chars` code points, preferring the end
// of the last sentence ('.', '!' or '?' followed by whitespace or the end).
// Returns true when it cut anything.
bool truncate_paragraph(std::string &paragraph, std::size_t max_chars);

// Selection sampling (Knuth's Algorithm S): `k` ascending indices out of
// [0, n). Uses raw std::mt19937_64 output, whose sequence the standard fixes,
// so results do not depend on the standard library's distributions.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace asymgauge
