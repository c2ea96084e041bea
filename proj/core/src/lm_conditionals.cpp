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

#include "asymgauge/lm_conditionals.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <fcntl.h>
#include <unistd.h>

#include <fmt/format.h>

#include "asymgauge/error.hpp"
#include "asymgauge/io.hpp"
#include "asymgauge/text.hpp"

namespace asymgauge {

namespace {

std::string id_list(const std::vector<std::string> &ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < 5; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > 5) out += fmt::format(", ... ({} more)", ids.size() - 5);
  return out;
}

// Order-independent sum: add the terms in ascending order.
long double sorted_sum(std::vector<double> &terms) {
  std::sort(terms.begin(), terms.end());
  long double s = 0.0L;
  for (double t : terms) s += t;
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct Prepared {
  WordPair pair;
  ContextSample sample;
  std::vector<ScoringTask> tasks;
  std::uint64_t count_a = 0;
  std::uint64_t count_b = 0;
};

Prepared prepare(const WordPair &pair, const ParagraphStore &store, const LmRunOptions &options) {
  Prepared p;
  p.pair = pair;
  p.sample = store.contexts_for_pair(pair.first, pair.second, options.cap,
                                     pair_seed(options.seed, pair));
  p.tasks = emit_tasks(p.sample.records, pair);
  p.count_a = store.context_count(pair.first);
  p.count_b = store.context_count(pair.second);
  return p;
}

// Final state of one pair, as kept in the checkpoint.
struct Outcome {
  enum Status { kOk, kAbsent, kRefused } status = kOk;
  PairEstimate estimate;
  std::string reason;
};

const char *status_name(Outcome::Status s) {
  switch (s) {
    case Outcome::kOk: return "ok";
    case Outcome::kAbsent: return "absent";
    case Outcome::kRefused: return "refused";
  }
  return "?";
}

std::string checkpoint_line(const Outcome &o) {
  const PairEstimate &e = o.estimate;
  return fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", e.pair.first,
                     e.pair.second, status_name(o.status), e.population, e.n_contexts_used,
                     e.sum_weight_a, e.sum_weight_b, e.total_count_a, e.total_count_b,
                     io::format_g17(e.mean_char_distance), io::format_g17(e.p_b_given_a),
                     io::format_g17(e.p_a_given_b), o.reason);
}

std::string run_key(const LmRunOptions &options) {
  std::string material = fmt::format("{}\x1f{}\x1f{}\x1f{}", options.config_hash, options.cap,
                                     options.seed, options.combine == Combine::kMean ? "mean" : "sum");
  return io::hex64(io::fnv1a64(material));
}

class Checkpoint {
 public:
  Checkpoint(std::filesystem::path path, std::string key)
      : path_(std::move(path)), key_(std::move(key)) {}

  ~Checkpoint() {
    if (fd_ >= 0) ::close(fd_);
  }

  std::map<WordPair, Outcome> load() const {
    std::map<WordPair, Outcome> done;
    if (path_.empty() || !std::filesystem::exists(path_)) return done;
    std::string data = io::read_file(path_);
    // A crash can leave a torn final line; it is simply redone.
    auto last_nl = data.rfind('\n');
    data.resize(last_nl == std::string::npos ? 0 : last_nl + 1);
    std::istringstream in(data);
    std::string line;
    std::size_t lineno = 0;
    bool keyed = false;
    while (io::read_line(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      if (line.front() == '#') {
        auto f = io::split(line, '\t');
        if (f.size() == 2 && f[0] == "# run_key") {
          if (f[1] != key_) {
            throw StaleCheckpointError("checkpoint " + path_.string() +
                                       " was written under a different configuration");
          }
          keyed = true;
        }
        continue;
      }
      auto f = io::split(line, '\t');
      if (f.size() != 13) {
        throw FormatError(fmt::format("checkpoint {}: bad row at line {}", path_.string(), lineno));
      }
      Outcome o;
      PairEstimate &e = o.estimate;
      e.pair = {std::string(f[0]), std::string(f[1])};
      if (f[2] == "ok") {
        o.status = Outcome::kOk;
      } else if (f[2] == "absent") {
        o.status = Outcome::kAbsent;
      } else if (f[2] == "refused") {
        o.status = Outcome::kRefused;
      } else {
        throw FormatError(fmt::format("checkpoint {}: bad status at line {}", path_.string(), lineno));
      }
      long long n[6];
      bool ok = true;
      for (int i = 0; i < 6; ++i) ok = ok && io::parse_int(f[3 + i], n[i]) && n[i] >= 0;
      ok = ok && io::parse_double(f[9], e.mean_char_distance) &&
           io::parse_double(f[10], e.p_b_given_a) && io::parse_double(f[11], e.p_a_given_b);
      if (!ok) {
        throw FormatError(fmt::format("checkpoint {}: bad number at line {}", path_.string(), lineno));
      }
      e.population = static_cast<std::size_t>(n[0]);
      e.n_contexts_used = static_cast<std::size_t>(n[1]);
      e.sum_weight_a = static_cast<std::uint64_t>(n[2]);
      e.sum_weight_b = static_cast<std::uint64_t>(n[3]);
      e.total_count_a = static_cast<std::uint64_t>(n[4]);
      e.total_count_b = static_cast<std::uint64_t>(n[5]);
      o.reason = std::string(f[12]);
      done[e.pair] = std::move(o);
    }
    if (!done.empty() && !keyed) {
      throw StaleCheckpointError("checkpoint " + path_.string() + " has no run key");
    }
    return done;
  }

  // Appends one batch of outcomes and fsyncs. Only whole lines are written,
  // in a single call, so a reader sees either the batch or a torn tail.
  void append(const std::vector<Outcome> &outcomes) {
    if (path_.empty() || outcomes.empty()) return;
    std::string chunk;
    if (fd_ < 0) {
      bool fresh = !std::filesystem::exists(path_) || std::filesystem::file_size(path_) == 0;
      if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
      fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
      if (fd_ < 0) throw IoError("cannot open checkpoint " + path_.string() + ": " + std::strerror(errno));
      if (fresh) chunk = "# asymgauge lm checkpoint\n# run_key\t" + key_ + "\n";
    }
    for (const auto &o : outcomes) chunk += checkpoint_line(o);
    std::string_view rest = chunk;
    while (!rest.empty()) {
      ssize_t n = ::write(fd_, rest.data(), rest.size());
      if (n < 0) {
        if (errno == EINTR) continue;
        throw IoError("cannot write checkpoint " + path_.string() + ": " + std::strerror(errno));
      }
      rest.remove_prefix(static_cast<std::size_t>(n));
    }
    if (::fsync(fd_) != 0) throw IoError("fsync failed for checkpoint " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::string key_;
  int fd_ = -1;
};

std::vector<WireResponse> score_with_retries(ScoringChannel &channel,
                                             const std::vector<WireRequest> &batch,
                                             const LmRunOptions &options) {
  for (unsigned attempt = 0;; ++attempt) {
    try {
      return channel.score(batch);
    } catch (const ScorerChannelError &e) {
      if (attempt >= options.retries) {
        std::string where = options.checkpoint.empty()
                                ? std::string("no checkpoint configured")
                                : "resume from checkpoint " + options.checkpoint.string();
        throw ScorerChannelError(fmt::format("{} (after {} attempt(s); {})", e.what(), attempt + 1,
                                             where));
      }
      channel.reset();
    }
  }
}

}  // namespace

IncompleteBatchError::IncompleteBatchError(std::vector<std::string> task_ids)
    : Error("incomplete-batch",
            fmt::format("{} task(s) without a result: {}", task_ids.size(), id_list(task_ids))),
      task_ids_(std::move(task_ids)) {}

WireRequest ScoringTask::to_request() const {
  WireRequest r;
  r.id = task_id;
  r.text = context_text;
  r.offset = text::code_point_index(context_text, mask_offset);
  r.length = text::count_code_points(target_word);
  r.target = target_word;
  return r;
}

std::string task_id(const WordPair &pair, std::uint32_t paragraph, std::uint32_t offset,
                    Direction direction) {
  return fmt::format("{}|{}|{}|{}|{}", pair.first, pair.second, paragraph, offset,
                     direction == Direction::kBGivenA ? "ba" : "ab");
}

std::vector<ScoringTask> emit_tasks(const std::vector<ContextRecord> &contexts,
                                    const WordPair &pair) {
  std::vector<ScoringTask> tasks;
  for (const auto &c : contexts) {
    auto add = [&](std::uint32_t offset, Direction dir) {
      ScoringTask t;
      t.task_id = task_id(pair, c.paragraph, offset, dir);
      t.context_text = c.text;
      t.mask_offset = offset;
      t.target_word = dir == Direction::kBGivenA ? pair.second : pair.first;
      t.pair = pair;
      t.direction = dir;
      t.paragraph = c.paragraph;
      t.weight_a = c.weight_a();
      t.weight_b = c.weight_b();
      t.char_distance = c.min_char_distance;
      tasks.push_back(std::move(t));
    };
    for (auto off : c.b_offsets) add(off, Direction::kBGivenA);
    for (auto off : c.a_offsets) add(off, Direction::kAGivenB);
  }
  return tasks;
}

PairEstimate aggregate(std::span<const ScoreResult> results, std::span<const ScoringTask> tasks,
                       std::uint64_t count_a, std::uint64_t count_b, std::size_t population,
                       std::size_t sample_size, Combine combine) {
  if (sample_size < 1 || population < sample_size) {
    throw PreconditionError(fmt::format("need population >= sample size >= 1, got {} and {}",
                                        population, sample_size));
  }
  if (tasks.empty()) throw PreconditionError("no scoring tasks to aggregate");
  if (count_a == 0 || count_b == 0) throw PreconditionError("context count of zero");

  std::map<std::string_view, double> probs;
  for (const auto &r : results) {
    if (!std::isfinite(r.probability) || r.probability < 0.0 || r.probability > 1.0) {
      throw ProtocolError("probability outside [0, 1] for task " + r.task_id);
    }
    auto [it, fresh] = probs.emplace(r.task_id, r.probability);
    if (!fresh && it->second != r.probability) {
      throw ProtocolError("conflicting results for task " + r.task_id);
    }
  }

  struct Context {
    std::vector<double> b_probs;  // masked b, feeds P(b|a)
    std::vector<double> a_probs;
    std::uint32_t weight_a = 0;
    std::uint32_t weight_b = 0;
    std::uint32_t distance = 0;
  };
  std::map<std::uint32_t, Context> contexts;
  std::set<std::string_view> known;
  std::vector<std::string> missing;
  const WordPair &pair = tasks.front().pair;
  for (const auto &t : tasks) {
    if (t.pair != pair) throw PreconditionError("tasks of different pairs in one aggregate");
    known.insert(t.task_id);
    auto it = probs.find(t.task_id);
    if (it == probs.end()) {
      missing.push_back(t.task_id);
      continue;
    }
    Context &c = contexts[t.paragraph];
    c.weight_a = t.weight_a;
    c.weight_b = t.weight_b;
    c.distance = t.char_distance;
    (t.direction == Direction::kBGivenA ? c.b_probs : c.a_probs).push_back(it->second);
  }
  if (!missing.empty()) throw IncompleteBatchError(std::move(missing));
  for (const auto &[id, p] : probs) {
    if (!known.count(id)) throw ProtocolError("result for unknown task " + std::string(id));
  }
  if (contexts.size() != sample_size) {
    throw PreconditionError(fmt::format("tasks cover {} contexts, sample size is {}",
                                        contexts.size(), sample_size));
  }

  auto combine_probs = [&](std::vector<double> &v) -> long double {
    if (v.empty()) throw PreconditionError("context without a masked occurrence");
    long double s = sorted_sum(v);
    return combine == Combine::kMean ? s / static_cast<long double>(v.size()) : s;
  };

  PairEstimate e;
  e.pair = pair;
  e.n_contexts_used = contexts.size();
  e.population = population;
  e.total_count_a = count_a;
  e.total_count_b = count_b;
  std::vector<double> terms_ba;
  std::vector<double> terms_ab;
  std::vector<double> distances;
  for (auto &[para, c] : contexts) {
    terms_ba.push_back(static_cast<double>(c.weight_a * combine_probs(c.b_probs)));
    terms_ab.push_back(static_cast<double>(c.weight_b * combine_probs(c.a_probs)));
    e.sum_weight_a += c.weight_a;
    e.sum_weight_b += c.weight_b;
    distances.push_back(c.distance);
  }
  const long double scale =
      static_cast<long double>(population) / static_cast<long double>(sample_size);
  auto finish = [&](std::vector<double> &terms, std::uint64_t count) {
    long double p = scale * sorted_sum(terms) / static_cast<long double>(count);
    return static_cast<double>(std::min(p, 1.0L));
  };
  e.p_b_given_a = finish(terms_ba, count_a);
  e.p_a_given_b = finish(terms_ab, count_b);
  e.mean_char_distance =
      static_cast<double>(sorted_sum(distances) / static_cast<long double>(distances.size()));
  return e;
}

std::uint64_t pair_seed(std::uint64_t seed, const WordPair &pair) {
  return splitmix64(seed ^ io::fnv1a64(pair.first + '\x1f' + pair.second));
}

std::vector<WordPair> unordered_pairs(std::span<const WordPair> pairs) {
  std::vector<WordPair> out;
  std::set<WordPair> seen;
  for (const auto &[a, b] : pairs) {
    if (a == b) continue;
    WordPair u = make_unordered(a, b);
    if (seen.insert(u).second) out.push_back(std::move(u));
  }
  return out;
}

LmRunResult lm_conditional_table(std::span<const WordPair> pairs, const ParagraphStore &store,
                                 ScoringChannel &channel, std::string resource_id,
                                 const LmRunOptions &options) {
  if (options.cap < 1) throw PreconditionError("context cap must be >= 1");
  auto todo = unordered_pairs(pairs);
  Checkpoint checkpoint(options.checkpoint, run_key(options));
  std::map<WordPair, Outcome> done = checkpoint.load();
  const std::string model = channel.model_id();

  std::vector<Prepared> batch;
  auto run_batch = [&] {
    if (batch.empty()) return;
    std::vector<WireRequest> requests;
    for (const auto &p : batch) {
      for (const auto &t : p.tasks) requests.push_back(t.to_request());
    }
    std::map<std::string, WireResponse> responses;
    for (auto &r : score_with_retries(channel, requests, options)) {
      std::string id = r.id;
      responses.insert_or_assign(std::move(id), std::move(r));
    }
    std::vector<Outcome> outcomes;
    for (const auto &p : batch) {
      Outcome o;
      std::vector<ScoreResult> results;
      std::optional<std::string> refusal;
      for (const auto &t : p.tasks) {
        auto it = responses.find(t.task_id);
        if (it == responses.end()) continue;
        if (it->second.is_refusal()) {
          if (!refusal) refusal = it->second.refused;
          continue;
        }
        results.push_back({t.task_id, *it->second.prob, model});
      }
      if (refusal) {
        o.status = Outcome::kRefused;
        o.estimate.pair = p.pair;
        o.reason = *refusal;
      } else {
        o.estimate = aggregate(results, p.tasks, p.count_a, p.count_b, p.sample.population,
                               p.sample.records.size(), options.combine);
      }
      done[p.pair] = o;
      outcomes.push_back(std::move(o));
    }
    checkpoint.append(outcomes);
    batch.clear();
  };

  std::vector<Outcome> absent;
  for (const auto &pair : todo) {
    if (done.count(pair)) continue;
    Prepared p = prepare(pair, store, options);
    if (p.sample.population == 0) {
      Outcome o;
      o.status = Outcome::kAbsent;
      o.estimate.pair = pair;
      done[pair] = o;
      absent.push_back(std::move(o));
      continue;
    }
    batch.push_back(std::move(p));
    if (batch.size() >= std::max<std::size_t>(1, options.batch_pairs)) run_batch();
  }
  run_batch();
  checkpoint.append(absent);

  LmRunResult out;
  out.table = ConditionalTable(std::move(resource_id));
  std::vector<WordPair> sorted = todo;
  std::sort(sorted.begin(), sorted.end());
  for (const auto &pair : sorted) {
    const Outcome &o = done.at(pair);
    switch (o.status) {
      case Outcome::kOk: {
        const auto &[a, b] = pair;
        out.table.insert(a, b, std::max(o.estimate.p_b_given_a, options.floor));
        out.table.insert(b, a, std::max(o.estimate.p_a_given_b, options.floor));
        out.estimates.push_back(o.estimate);
        out.factors.push_back({pair, o.estimate.population, o.estimate.mean_char_distance});
        break;
      }
      case Outcome::kAbsent:
        out.factors.push_back({pair, 0, 0.0});
        break;
      case Outcome::kRefused:
        out.dropped.push_back({pair, o.reason});
        break;
    }
  }
  return out;
}

std::size_t write_task_file(std::span<const WordPair> pairs, const ParagraphStore &store,
                            const LmRunOptions &options, std::ostream &out) {
  std::size_t n = 0;
  for (const auto &pair : unordered_pairs(pairs)) {
    Prepared p = prepare(pair, store, options);
    for (const auto &t : p.tasks) {
      out << encode_request(t.to_request()) << '\n';
      ++n;
    }
  }
  return n;
}

std::string factors_to_tsv(const std::vector<FactorRecord> &factors) {
  std::string out;
  for (const auto &f : factors) {
    out += fmt::format("{}\t{}\t{}\t{}\n", f.pair.first, f.pair.second, f.population,
                       io::format_g17(f.mean_char_distance));
  }
  return out;
}

std::vector<FactorRecord> parse_factors_tsv(std::istream &in) {
  std::vector<FactorRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (io::read_line(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    auto f = io::split(line, '\t');
    long long population = 0;
    FactorRecord r;
    if (f.size() != 4 || !io::parse_int(f[2], population) || population < 0 ||
        !io::parse_double(f[3], r.mean_char_distance)) {
      throw ParseError("expected a<TAB>b<TAB>population<TAB>distance", lineno);
    }
    r.pair = {std::string(f[0]), std::string(f[1])};
    r.population = static_cast<std::size_t>(population);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace asymgauge
