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
#include <stdexcept>
#include <string>
#include <vector>

namespace asymgauge {

// Root of every exception thrown by the library. `kind()` is a short stable
// tag used by the CLI to pick an exit code and by tests to check the category.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string &what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string &kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// Malformed input text. `line()` is 1-based; 0 when not line oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string &what, std::size_t line = 0)
      : Error("parse", line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string &what) : Error("validation", what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string &what) : Error("precondition", what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &what) : Error("config", what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string &what) : Error("domain", what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string &what) : Error("dimension", what) {}
};

class UndefinedCorrelationError : public Error {
 public:
  explicit UndefinedCorrelationError(const std::string &what)
      : Error("undefined-correlation", what) {}
};

class AbsentWordError : public Error {
 public:
  explicit AbsentWordError(const std::string &word)
      : Error("absent-word", "word not in vector table: " + word), word_(word) {}

  const std::string &word() const noexcept { return word_; }

 private:
  std::string word_;
};

// Thrown when a set of ordered pairs is not fully covered by a LAR map or
// a conditional table.
class CoverageError : public Error {
 public:
  CoverageError(const std::string &what, std::vector<std::string> missing)
      : Error("coverage", what), missing_(std::move(missing)) {}

  const std::vector<std::string> &missing() const noexcept { return missing_; }

 private:
  std::vector<std::string> missing_;
};

class IncompleteBatchError : public Error {
 public:
  explicit IncompleteBatchError(std::vector<std::string> task_ids);

  const std::vector<std::string> &task_ids() const noexcept { return task_ids_; }

 private:
  std::vector<std::string> task_ids_;
};

// Scorer returned something the wire protocol does not allow.
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string &what) : Error("protocol", what) {}
};

// Scorer could not be reached or died mid-batch. Retriable.
class ScorerChannelError : public Error {
 public:
  explicit ScorerChannelError(const std::string &what) : Error("scorer-channel", what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string &what) : Error("format", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string &what) : Error("io", what) {}
};

class DependencyError : public Error {
 public:
  DependencyError(const std::string &what, std::string required_subcommand)
      : Error("dependency", what), required_(std::move(required_subcommand)) {}

  const std::string &required_subcommand() const noexcept { return required_; }

 private:
  std::string required_;
};

class StaleCheckpointError : public Error {
 public:
  explicit StaleCheckpointError(const std::string &what) : Error("stale-checkpoint", what) {}
};

}  // namespace asymgauge
