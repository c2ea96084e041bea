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

#include "asymgauge/corpus_index.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <random>
#include <thread>

#include "asymgauge/error.hpp"
#include "asymgauge/io.hpp"
#include "asymgauge/text.hpp"

namespace asymgauge {

namespace {

constexpr char kMagic[5] = {'A', 'S', 'Y', 'X', '1'};

bool blank(std::string_view line) { return io::trim(line).empty(); }

struct Shard {
  std::vector<Paragraph> paragraphs;
  std::unordered_map<std::string, PostingList> postings;
  IndexStats stats;
};

void index_documents(const std::vector<Document> &docs, std::size_t begin, std::size_t end,
                     const IndexOptions &options, Shard &shard) {
  for (std::size_t d = begin; d < end; ++d) {
    const Document &doc = docs[d];
    ++shard.stats.documents;
    if (!text::valid_utf8(doc.text)) {
      ++shard.stats.skipped_documents;
      continue;
    }
    auto paras = split_paragraphs(doc.text);
    for (std::size_t p = 0; p < paras.size(); ++p) {
      std::string body = std::move(paras[p]);
      if (truncate_paragraph(body, options.max_paragraph_chars)) ++shard.stats.truncated_paragraphs;
      auto ordinal = static_cast<std::uint32_t>(shard.paragraphs.size());

      // Group this paragraph's token offsets by lowercased word.
      std::unordered_map<std::string, std::vector<std::uint32_t>> local;
      for (const auto &tok : text::tokenize(body)) {
        local[text::to_lower(std::string_view(body).substr(tok.offset, tok.length))].push_back(
            static_cast<std::uint32_t>(tok.offset));
      }
      for (auto &[word, offs] : local) {
        PostingList &pl = shard.postings[word];
        pl.paragraphs.push_back(ordinal);
        pl.offsets.insert(pl.offsets.end(), offs.begin(), offs.end());
        pl.offsets_start.push_back(static_cast<std::uint32_t>(pl.offsets.size()));
      }
      shard.paragraphs.push_back({doc.id, static_cast<std::uint32_t>(p), std::move(body)});
    }
  }
}

// Code-point indices of ascending byte offsets, in one pass over `text`.
std::vector<std::uint32_t> to_code_points(std::string_view text,
                                          const std::vector<std::uint32_t> &byte_offsets) {
  std::vector<std::uint32_t> out;
  out.reserve(byte_offsets.size());
  std::size_t pos = 0;
  std::uint32_t cp = 0;
  for (std::uint32_t target : byte_offsets) {
    for (; pos < target; ++pos) {
      if ((static_cast<unsigned char>(text[pos]) & 0xC0) != 0x80) ++cp;
    }
    out.push_back(cp);
  }
  return out;
}

std::uint32_t nearest_distance(const std::vector<std::uint32_t> &x,
                               const std::vector<std::uint32_t> &y) {
  std::uint32_t best = UINT32_MAX;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.size() && j < y.size()) {
    std::uint32_t d = x[i] > y[j] ? x[i] - y[j] : y[j] - x[i];
    best = std::min(best, d);
    if (x[i] < y[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return best;
}

class Writer {
 public:
  explicit Writer(std::string &out) : out_(out) {}
  template <typename T>
  void pod(T v) {
    out_.append(reinterpret_cast<const char *>(&v), sizeof(T));
  }
  void str(std::string_view s) {
    pod<std::uint64_t>(s.size());
    out_.append(s);
  }
  void u32s(const std::vector<std::uint32_t> &v) {
    pod<std::uint64_t>(v.size());
    out_.append(reinterpret_cast<const char *>(v.data()), v.size() * sizeof(std::uint32_t));
  }

 private:
  std::string &out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  template <typename T>
  T pod() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string str() {
    auto n = pod<std::uint64_t>();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::vector<std::uint32_t> u32s() {
    auto n = pod<std::uint64_t>();
    if (n > (in_.size() - pos_) / sizeof(std::uint32_t)) throw FormatError("index file truncated");
    std::vector<std::uint32_t> v(n);
    std::memcpy(v.data(), in_.data() + pos_, n * sizeof(std::uint32_t));
    pos_ += n * sizeof(std::uint32_t);
    return v;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (n > in_.size() - pos_) throw FormatError("index file truncated");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Document> load_corpus_directory(const std::filesystem::path &dir) {
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Document> docs;
  docs.reserve(files.size());
  for (const auto &f : files) docs.push_back({f.stem().string(), io::read_file(f)});
  return docs;
}

std::vector<Document> load_corpus_stream(std::istream &in, std::string_view id_prefix) {
  std::vector<Document> docs;
  std::string chunk;
  std::size_t n = 0;
  while (std::getline(in, chunk, '\f')) {
    docs.push_back({std::string(id_prefix) + std::to_string(n++), std::move(chunk)});
    chunk.clear();
  }
  return docs;
}

std::vector<Document> load_corpus(const std::filesystem::path &path) {
  if (std::filesystem::is_directory(path)) return load_corpus_directory(path);
  auto in = io::open_input(path);
  return load_corpus_stream(*in, path.stem().string() + ":");
}

std::vector<std::string> split_paragraphs(std::string_view document) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  std::size_t start = 0;
  while (start <= document.size()) {
    std::size_t nl = document.find('\n', start);
    std::string_view line =
        document.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (blank(line)) {
      flush();
    } else {
      if (!cur.empty()) cur.push_back('\n');
      cur.append(line);
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  flush();
  return out;
}

bool truncate_paragraph(std::string &paragraph, std::size_t max_chars) {
  if (text::count_code_points(paragraph) <= max_chars) return false;
  // Byte position just past code point number `max_chars`.
  std::size_t limit = 0;
  std::size_t seen = 0;
  while (limit < paragraph.size()) {
    if ((static_cast<unsigned char>(paragraph[limit]) & 0xC0) != 0x80) {
      if (seen == max_chars) break;
      ++seen;
    }
    ++limit;
  }
  std::size_t cut = 0;
  for (std::size_t i = limit; i-- > 0;) {
    char c = paragraph[i];
    if (c == '.' || c == '!' || c == '?') {
      bool at_end = i + 1 == paragraph.size();
      bool then_space = i + 1 < paragraph.size() &&
                        std::strchr(" \t\n\r", paragraph[i + 1]) != nullptr;
      if (at_end || then_space) {
        cut = i + 1;
        break;
      }
    }
  }
  paragraph.resize(cut > 0 ? cut : limit);
  return true;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> out;
  if (k >= n) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
  }
  std::mt19937_64 rng(seed);
  out.reserve(k);
  for (std::size_t t = 0; t < n && out.size() < k; ++t) {
    // Uniform in [0, 1) from the top 53 bits.
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (static_cast<double>(n - t) * u < static_cast<double>(k - out.size())) out.push_back(t);
  }
  return out;
}

ParagraphStore ParagraphStore::build(const std::vector<Document> &docs, const IndexOptions &options) {
  unsigned workers = std::max(1u, std::min<unsigned>(options.threads,
                                                     static_cast<unsigned>(docs.size())));
  std::vector<Shard> shards(workers);
  if (workers == 1) {
    index_documents(docs, 0, docs.size(), options, shards[0]);
  } else {
    std::vector<std::jthread> pool;
    std::size_t per = (docs.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      std::size_t b = std::min(docs.size(), w * per);
      std::size_t e = std::min(docs.size(), b + per);
      pool.emplace_back([&, b, e, w] { index_documents(docs, b, e, options, shards[w]); });
    }
  }

  // Merge in document order so ordinals and postings match a serial build.
  ParagraphStore store;
  for (auto &shard : shards) {
    auto base = static_cast<std::uint32_t>(store.paragraphs_.size());
    for (auto &[word, local] : shard.postings) {
      PostingList &pl = store.postings_[word];
      auto offset_base = static_cast<std::uint32_t>(pl.offsets.size());
      for (auto p : local.paragraphs) pl.paragraphs.push_back(p + base);
      for (std::size_t i = 1; i < local.offsets_start.size(); ++i) {
        pl.offsets_start.push_back(local.offsets_start[i] + offset_base);
      }
      pl.offsets.insert(pl.offsets.end(), local.offsets.begin(), local.offsets.end());
    }
    std::move(shard.paragraphs.begin(), shard.paragraphs.end(),
              std::back_inserter(store.paragraphs_));
    store.stats_.documents += shard.stats.documents;
    store.stats_.skipped_documents += shard.stats.skipped_documents;
    store.stats_.truncated_paragraphs += shard.stats.truncated_paragraphs;
  }
  return store;
}

const PostingList *ParagraphStore::postings(const std::string &word) const {
  auto it = postings_.find(word);
  return it == postings_.end() ? nullptr : &it->second;
}

std::uint64_t ParagraphStore::context_count(const std::string &word) const {
  const PostingList *pl = postings(word);
  return pl == nullptr ? 0 : pl->offsets.size();
}

std::size_t ParagraphStore::co_occurrence_count(const std::string &a, const std::string &b) const {
  if (a == b) return 0;
  const PostingList *pa = postings(a);
  const PostingList *pb = postings(b);
  if (pa == nullptr || pb == nullptr) return 0;
  std::size_t n = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < pa->size() && j < pb->size()) {
    if (pa->paragraphs[i] < pb->paragraphs[j]) {
      ++i;
    } else if (pb->paragraphs[j] < pa->paragraphs[i]) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

ContextSample ParagraphStore::contexts_for_pair(const std::string &a, const std::string &b,
                                                std::size_t cap, std::uint64_t seed) const {
  if (cap < 1) throw PreconditionError("context cap must be >= 1");
  ContextSample sample;
  if (a == b) return sample;
  const PostingList *pa = postings(a);
  const PostingList *pb = postings(b);
  if (pa == nullptr || pb == nullptr) return sample;

  std::vector<std::pair<std::size_t, std::size_t>> hits;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < pa->size() && j < pb->size()) {
    if (pa->paragraphs[i] < pb->paragraphs[j]) {
      ++i;
    } else if (pb->paragraphs[j] < pa->paragraphs[i]) {
      ++j;
    } else {
      hits.emplace_back(i++, j++);
    }
  }
  sample.population = hits.size();

  for (std::size_t h : sample_indices(hits.size(), cap, seed)) {
    auto [ia, ib] = hits[h];
    ContextRecord rec;
    rec.paragraph = pa->paragraphs[ia];
    rec.text = paragraphs_[rec.paragraph].text;
    rec.a_offsets.assign(pa->offsets.begin() + pa->offsets_start[ia],
                         pa->offsets.begin() + pa->offsets_start[ia + 1]);
    rec.b_offsets.assign(pb->offsets.begin() + pb->offsets_start[ib],
                         pb->offsets.begin() + pb->offsets_start[ib + 1]);
    rec.min_char_distance = nearest_distance(to_code_points(rec.text, rec.a_offsets),
                                             to_code_points(rec.text, rec.b_offsets));
    sample.records.push_back(std::move(rec));
  }
  return sample;
}

void ParagraphStore::save(const std::filesystem::path &path) const {
  std::string out;
  Writer w(out);
  out.append(kMagic, sizeof(kMagic));
  w.pod<std::uint32_t>(kFormatVersion);
  w.pod<std::uint64_t>(stats_.documents);
  w.pod<std::uint64_t>(stats_.skipped_documents);
  w.pod<std::uint64_t>(stats_.truncated_paragraphs);
  w.pod<std::uint64_t>(paragraphs_.size());
  for (const auto &p : paragraphs_) {
    w.str(p.doc_id);
    w.pod<std::uint32_t>(p.para_index);
    w.str(p.text);
  }
  std::vector<const std::string *> words;
  words.reserve(postings_.size());
  for (const auto &[word, pl] : postings_) words.push_back(&word);
  std::sort(words.begin(), words.end(), [](auto *l, auto *r) { return *l < *r; });
  w.pod<std::uint64_t>(words.size());
  for (const std::string *word : words) {
    const PostingList &pl = postings_.at(*word);
    w.str(*word);
    w.u32s(pl.paragraphs);
    w.u32s(pl.offsets_start);
    w.u32s(pl.offsets);
  }
  io::write_file_atomic(path, out);
}

ParagraphStore ParagraphStore::load(const std::filesystem::path &path) {
  std::string bytes = io::read_file(path);
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError(path.string() + " is not an asymgauge index (bad magic)");
  }
  Reader r(std::string_view(bytes).substr(sizeof(kMagic)));
  auto version = r.pod<std::uint32_t>();
  if (version != kFormatVersion) {
    throw FormatError("index format version " + std::to_string(version) + " in " + path.string() +
                      ", expected " + std::to_string(kFormatVersion));
  }
  ParagraphStore store;
  store.stats_.documents = r.pod<std::uint64_t>();
  store.stats_.skipped_documents = r.pod<std::uint64_t>();
  store.stats_.truncated_paragraphs = r.pod<std::uint64_t>();
  auto n = r.pod<std::uint64_t>();
  store.paragraphs_.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Paragraph p;
    p.doc_id = r.str();
    p.para_index = r.pod<std::uint32_t>();
    p.text = r.str();
    store.paragraphs_.push_back(std::move(p));
  }
  auto words = r.pod<std::uint64_t>();
  store.postings_.reserve(words);
  for (std::uint64_t i = 0; i < words; ++i) {
    std::string word = r.str();
    PostingList pl;
    pl.paragraphs = r.u32s();
    pl.offsets_start = r.u32s();
    pl.offsets = r.u32s();
    if (pl.offsets_start.size() != pl.paragraphs.size() + 1 ||
        pl.offsets_start.back() != pl.offsets.size()) {
      throw FormatError("corrupt posting list for '" + word + "'");
    }
    store.postings_.emplace(std::move(word), std::move(pl));
  }
  if (!r.done()) throw FormatError("trailing bytes in index file " + path.string());
  return store;
}

}  // namespace asymgauge
