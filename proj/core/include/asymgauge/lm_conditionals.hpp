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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "asymgauge/conditional_table.hpp"
#include "asymgauge/corpus_index.hpp"
#include "asymgauge/scoring.hpp"

namespace asymgauge {

// Which conditional a masked prediction feeds: kBGivenA masks an occurrence
// of b and contributes to P(b|a).
enum class Direction { kBGivenA, kAGivenB };

struct ScoringTask {
  std::string task_id;
  std::string context_text;
  std::uint32_t mask_offset = 0;  // byte offset of the masked occurrence
  std::string target_word;
  WordPair pair;
  Direction direction = Direction::kBGivenA;
  std::uint32_t paragraph = 0;
  // Properties of the context the task came from.
  std::uint32_t weight_a = 0;
  std::uint32_t weight_b = 0;
  std::uint32_t char_distance = 0;

  // Wire form, with the offset and length converted to code points.
  WireRequest to_request() const;
};

struct ScoreResult {
  std::string task_id;
  double probability = 0.0;
  std::string model_id;
};

struct PairEstimate {
  WordPair pair;
  double p_b_given_a = 0.0;
  double p_a_given_b = 0.0;
  std::size_t n_contexts_used = 0;
  std::size_t population = 0;  // co-occurring paragraphs before sampling
  std::uint64_t sum_weight_a = 0;
  std::uint64_t sum_weight_b = 0;
  std::uint64_t total_count_a = 0;
  std::uint64_t total_count_b = 0;
  double mean_char_distance = 0.0;

  friend bool operator==(const PairEstimate &, const PairEstimate &) = default;
};

// `a|b|paragraph|byte offset|ba` (or `ab` for the a-given-b direction).
std::string task_id(const WordPair &pair, std::uint32_t paragraph, std::uint32_t offset,
                    Direction direction);

// One kBGivenA task per occurrence of b and one kAGivenB task per occurrence
// of a in every context, in paragraph then offset order.
std::vector<ScoringTask> emit_tasks(const std::vector<ContextRecord> &contexts,
                                    const WordPair &pair);

// How the occurrence-level results of one context combine.
enum class Combine { kMean, kSum };

// Weighted, extrapolated expectation over the sampled contexts:
//   p_b_given_a = (P / n) * sum_c weight_a(c) * P(b|c) / |C(a)|
// where P(b|c) combines the context's b-masked results. Clamped to at most 1.
// Throws IncompleteBatchError when a task has no result, ProtocolError for
// a probability outside [0, 1] or a result for an unknown task, and
// PreconditionError unless population >= sample_size >= 1.
PairEstimate aggregate(std::span<const ScoreResult> results, std::span<const ScoringTask> tasks,
                       std::uint64_t count_a, std::uint64_t count_b, std::size_t population,
                       std::size_t sample_size, Combine combine = Combine::kMean);

struct LmRunOptions {
  std::size_t cap = 1000;
  std::uint64_t seed = 0;
  double floor = 1e-12;
  Combine combine = Combine::kMean;
  std::size_t batch_pairs = 16;
  unsigned retries = 2;
  // Empty disables checkpointing.
  std::filesystem::path checkpoint;
  std::string config_hash;
};

// RQ-style factor record for binning: population P and nearest-occurrence
// distance averaged over the sampled contexts.
struct FactorRecord {
  WordPair pair;
  std::size_t population = 0;
  double mean_char_distance = 0.0;
};

struct DroppedPair {
  WordPair pair;
  std::string reason;
};

struct LmRunResult {
  ConditionalTable table;
  std::vector<PairEstimate> estimates;  // sorted by pair
  std::vector<FactorRecord> factors;    // sorted by pair, includes P = 0 pairs
  std::vector<DroppedPair> dropped;     // refused by the scorer
};

// Context sampling seed for one unordered pair.
std::uint64_t pair_seed(std::uint64_t seed, const WordPair &pair);

// Distinct unordered pairs (a < b, a != b) in first-seen order.
std::vector<WordPair> unordered_pairs(std::span<const WordPair> pairs);

// Estimates P(b|a) and P(a|b) for every pair. Pairs without co-occurrence
// are left out of the table (factor log keeps them with P = 0); pairs with a
// refused task are dropped and reported. Values are floored at
// `options.floor`. Scorer failures are retried `options.retries` times per
// batch; then ScorerChannelError is thrown, leaving the checkpoint behind.
// An existing checkpoint with the same config hash is resumed; a different
// hash throws StaleCheckpointError.
LmRunResult lm_conditional_table(std::span<const WordPair> pairs, const ParagraphStore &store,
                                 ScoringChannel &channel, std::string resource_id,
                                 const LmRunOptions &options);

// Writes the wire requests of every task, one per line, for offline
// scoring. Returns the number of requests.
std::size_t write_task_file(std::span<const WordPair> pairs, const ParagraphStore &store,
                            const LmRunOptions &options, std::ostream &out);

std::string factors_to_tsv(const std::vector<FactorRecord> &factors);
std::vector<FactorRecord> parse_factors_tsv(std::istream &in);

}  // namespace asymgauge
