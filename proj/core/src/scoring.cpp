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

#include "asymgauge/scoring.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstring>
#include <thread>

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "asymgauge/error.hpp"
#include "asymgauge/io.hpp"
#include "asymgauge/text.hpp"

extern char **environ;

namespace asymgauge {

namespace {

using nlohmann::json;

json parse_object(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error &e) {
    throw ProtocolError(std::string("malformed JSON line: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("protocol line is not a JSON object");
  return j;
}

std::string string_field(const json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ProtocolError(std::string("missing or non-string field \"") + key + "\"");
  }
  return it->get<std::string>();
}

std::size_t count_field(const json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer() || it->get<long long>() < 0) {
    throw ProtocolError(std::string("missing or negative field \"") + key + "\"");
  }
  return it->get<std::size_t>();
}

void write_all(int fd, std::string_view bytes) {
  while (!bytes.empty()) {
    ssize_t n = ::write(fd, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ScorerChannelError(std::string("write to scorer failed: ") + std::strerror(errno));
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

std::string encode_request(const WireRequest &request) {
  json j = {{"id", request.id},
            {"text", request.text},
            {"offset", request.offset},
            {"length", request.length},
            {"target", request.target}};
  return j.dump();
}

std::string encode_response(const WireResponse &response) {
  json j = {{"id", response.id}};
  if (response.prob) {
    j["prob"] = *response.prob;
  } else {
    j["refused"] = response.refused;
  }
  if (response.truncated) j["truncated"] = true;
  return j.dump();
}

WireRequest decode_request(std::string_view line) {
  json j = parse_object(line);
  WireRequest r;
  r.id = string_field(j, "id");
  r.text = string_field(j, "text");
  r.offset = count_field(j, "offset");
  r.length = count_field(j, "length");
  r.target = string_field(j, "target");
  return r;
}

WireResponse decode_response(std::string_view line) {
  json j = parse_object(line);
  WireResponse r;
  r.id = string_field(j, "id");
  if (auto t = j.find("truncated"); t != j.end()) {
    if (!t->is_boolean()) throw ProtocolError("non-boolean truncated flag for task " + r.id);
    r.truncated = t->get<bool>();
  }
  auto prob = j.find("prob");
  if (prob != j.end()) {
    if (!prob->is_number()) throw ProtocolError("non-numeric prob for task " + r.id);
    double p = prob->get<double>();
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw ProtocolError("prob outside [0, 1] for task " + r.id);
    }
    r.prob = p;
    return r;
  }
  r.refused = string_field(j, "refused");
  return r;
}

WireResponse MockScorer::score_one(const WireRequest &request) const {
  WireResponse r;
  r.id = request.id;
  std::size_t begin = text::byte_offset(request.text, request.offset);
  std::size_t end = text::byte_offset(request.text, request.offset + request.length);
  std::string_view slice = std::string_view(request.text).substr(begin, end - begin);
  if (text::to_lower(slice) != text::to_lower(request.target)) {
    r.refused = "offset-mismatch";
  } else if (refuse_.count(request.target)) {
    r.refused = "multi-token-target";
  } else {
    r.prob = closed_form(request.offset);
  }
  return r;
}

std::vector<WireResponse> MockScorer::score(const std::vector<WireRequest> &batch) {
  std::vector<WireResponse> out;
  out.reserve(batch.size());
  for (const auto &request : batch) out.push_back(score_one(request));
  return out;
}

ProcessScorer::ProcessScorer(std::string command, std::string model_id)
    : command_(std::move(command)), model_id_(std::move(model_id)) {
  // A scorer that dies mid-batch must surface as EPIPE, not kill us.
  std::signal(SIGPIPE, SIG_IGN);
}

ProcessScorer::~ProcessScorer() { stop(); }

void ProcessScorer::start() {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw ScorerChannelError("pipe() failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw ScorerChannelError("pipe() failed");
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  std::string shell = "/bin/sh";
  std::string flag = "-c";
  char *argv[] = {shell.data(), flag.data(), command_.data(), nullptr};
  pid_t pid = -1;
  int rc = ::posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw ScorerChannelError("cannot start scorer '" + command_ + "': " + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  pending_.clear();
}

void ProcessScorer::stop() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) != 0) {
        pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

void ProcessScorer::reset() { stop(); }

std::vector<WireResponse> ProcessScorer::score(const std::vector<WireRequest> &batch) {
  if (pid_ < 0) start();
  std::string payload;
  std::map<std::string, bool> expected;
  for (const auto &request : batch) {
    payload += encode_request(request);
    payload += '\n';
    expected.emplace(request.id, false);
  }
  payload += '\n';

  // Write from a separate thread so a scorer that answers while still
  // reading cannot deadlock us on full pipes.
  std::string write_error;
  std::jthread writer([&] {
    try {
      write_all(to_child_, payload);
    } catch (const ScorerChannelError &e) {
      write_error = e.what();
    }
  });

  std::vector<WireResponse> out;
  out.reserve(batch.size());
  char buf[1 << 16];
  while (out.size() < batch.size()) {
    auto nl = pending_.find('\n');
    if (nl == std::string::npos) {
      ssize_t n = ::read(from_child_, buf, sizeof buf);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        writer.join();
        throw ScorerChannelError("scorer '" + command_ + "' closed its output after " +
                                 std::to_string(out.size()) + " of " +
                                 std::to_string(batch.size()) + " responses" +
                                 (write_error.empty() ? "" : " (" + write_error + ")"));
      }
      pending_.append(buf, static_cast<std::size_t>(n));
      continue;
    }
    std::string line = pending_.substr(0, nl);
    pending_.erase(0, nl + 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (io::trim(line).empty()) continue;
    WireResponse r = decode_response(line);
    auto it = expected.find(r.id);
    if (it == expected.end()) throw ProtocolError("response for unknown task id " + r.id);
    if (it->second) throw ProtocolError("duplicate response for task id " + r.id);
    it->second = true;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<WireResponse> ResultFileChannel::score(const std::vector<WireRequest> &batch) {
  std::vector<WireResponse> out;
  for (const auto &request : batch) {
    auto it = responses_.find(request.id);
    if (it != responses_.end()) out.push_back(it->second);
  }
  return out;
}

std::map<std::string, WireResponse> read_responses(std::istream &in) {
  std::map<std::string, WireResponse> out;
  std::string line;
  std::size_t lineno = 0;
  while (io::read_line(in, line)) {
    ++lineno;
    if (io::trim(line).empty()) continue;
    WireResponse r;
    try {
      r = decode_response(line);
    } catch (const ProtocolError &e) {
      throw ProtocolError(std::string(e.what()) + " (line " + std::to_string(lineno) + ")");
    }
    auto [it, fresh] = out.emplace(r.id, r);
    if (!fresh && !(it->second == r)) {
      throw ProtocolError("conflicting responses for task id " + r.id);
    }
  }
  return out;
}

void serve(ScoringChannel &channel, std::istream &in, std::ostream &out) {
  std::vector<WireRequest> batch;
  auto flush_batch = [&] {
    if (batch.empty()) return;
    for (const auto &r : channel.score(batch)) out << encode_response(r) << '\n';
    out << '\n';
    out.flush();
    batch.clear();
  };
  std::string line;
  while (io::read_line(in, line)) {
    if (io::trim(line).empty()) {
      flush_batch();
      continue;
    }
    batch.push_back(decode_request(line));
  }
  flush_batch();
}

}  // namespace asymgauge
