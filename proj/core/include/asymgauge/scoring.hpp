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
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

// Line-delimited JSON protocol between the pipeline and a masked-LM scorer.
//
//   request:  {"id": "...", "text": "...", "offset": N, "length": L, "target": "w"}
//   response: {"id": "...", "prob": p}  or  {"id": "...", "refused": "reason"}
//
// `offset` and `length` count Unicode code points of `text`. A blank line
// ends a batch; responses may come back in any order.
namespace asymgauge {

struct WireRequest {
  std::string id;
  std::string text;
  std::size_t offset = 0;
  std::size_t length = 0;
  std::string target;

  friend bool operator==(const WireRequest &, const WireRequest &) = default;
};

struct WireResponse {
  std::string id;
  std::optional<double> prob;  // unset for refusals
  std::string refused;
  bool truncated = false;  // scorer cut the context down around the mask

  bool is_refusal() const noexcept { return !prob.has_value(); }
  friend bool operator==(const WireResponse &, const WireResponse &) = default;
};

// One JSON object, no trailing newline.
std::string encode_request(const WireRequest &request);
std::string encode_response(const WireResponse &response);

// Throw ProtocolError for malformed JSON, missing fields, or a probability
// that is not a finite number in [0, 1].
WireRequest decode_request(std::string_view line);
WireResponse decode_response(std::string_view line);

// Anything that can score a batch of requests.
class ScoringChannel {
 public:
  virtual ~ScoringChannel() = default;

  // Returns one response per request, in any order. Throws
  // ScorerChannelError when the scorer is unreachable (retriable).
  virtual std::vector<WireResponse> score(const std::vector<WireRequest> &batch) = 0;

  // Called before a retry; channels holding a process restart it.
  virtual void reset() {}

  virtual std::string model_id() const = 0;
};

// Deterministic stand-in scorer: prob = 1 / (1 + offset mod 7). Targets in
// `refuse` get a "multi-token-target" refusal. Requests whose slice does not
// match the target get "offset-mismatch".
class MockScorer : public ScoringChannel {
 public:
  explicit MockScorer(std::set<std::string> refuse = {}) : refuse_(std::move(refuse)) {}

  std::vector<WireResponse> score(const std::vector<WireRequest> &batch) override;
  std::string model_id() const override { return "mock"; }

  WireResponse score_one(const WireRequest &request) const;

  static double closed_form(std::size_t offset) { return 1.0 / (1.0 + static_cast<double>(offset % 7)); }

 private:
  std::set<std::string> refuse_;
};

// Runs `command` under /bin/sh and speaks the protocol over its stdin and
// stdout. The child is started lazily and kept across batches.
class ProcessScorer : public ScoringChannel {
 public:
  ProcessScorer(std::string command, std::string model_id);
  ~ProcessScorer() override;
  ProcessScorer(const ProcessScorer &) = delete;
  ProcessScorer &operator=(const ProcessScorer &) = delete;

  std::vector<WireResponse> score(const std::vector<WireRequest> &batch) override;
  void reset() override;
  std::string model_id() const override { return model_id_; }

 private:
  void start();
  void stop();

  std::string command_;
  std::string model_id_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;  // bytes read past the last full line
};

// Answers from a result file written by an offline scorer. Requests without
// a stored response are simply not answered.
class ResultFileChannel : public ScoringChannel {
 public:
  ResultFileChannel(std::map<std::string, WireResponse> responses, std::string model_id)
      : responses_(std::move(responses)), model_id_(std::move(model_id)) {}

  std::vector<WireResponse> score(const std::vector<WireRequest> &batch) override;
  std::string model_id() const override { return model_id_; }

 private:
  std::map<std::string, WireResponse> responses_;
  std::string model_id_;
};

// Reads response lines (blank lines ignored). Throws ProtocolError for a
// malformed line or conflicting duplicate ids.
std::map<std::string, WireResponse> read_responses(std::istream &in);

// Serves batches from `in` to `out` until EOF: each batch ends at a blank
// line (or EOF) and is answered in full, followed by a blank line.
void serve(ScoringChannel &channel, std::istream &in, std::ostream &out);

}  // namespace asymgauge
