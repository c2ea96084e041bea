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

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace asymgauge {

// Flat `key = value` run configuration. '#' starts a comment line; values
// keep inner whitespace. Relative paths resolve against the directory of
// the config file.
class RunConfig {
 public:
  RunConfig() = default;

  // Throws ParseError for a line without '=' or an empty key, ConfigError
  // for a repeated key.
  static RunConfig parse(std::istream &in, std::filesystem::path base_dir = ".");
  static RunConfig load(const std::filesystem::path &path);

  // Command-line override; replaces any value from the file.
  void set(const std::string &key, const std::string &value);

  bool has(const std::string &key) const { return values_.count(key) != 0; }

  // Throw ConfigError when the key is missing or malformed.
  std::string get(const std::string &key) const;
  std::string get_or(const std::string &key, const std::string &fallback) const;
  long long get_int(const std::string &key, long long fallback) const;
  double get_double(const std::string &key, double fallback) const;
  // Comma separated, blanks trimmed, empty items dropped.
  std::vector<std::string> get_list(const std::string &key) const;
  std::vector<double> get_double_list(const std::string &key,
                                      const std::vector<double> &fallback) const;

  std::filesystem::path path(const std::string &key) const;
  std::filesystem::path resolve(const std::filesystem::path &p) const;

  // Keys naming input files or directories: `conceptnet`, `corpus`, and any
  // key ending in `.path` or `.context_path`.
  static bool is_path_key(const std::string &key);

  // Throws ConfigError naming the first referenced path that does not exist.
  void validate_paths() const;

  // FNV-1a over the sorted `key=value` lines, as 16 hex digits.
  std::string hash() const;

  const std::map<std::string, std::string> &values() const noexcept { return values_; }
  const std::filesystem::path &base_dir() const noexcept { return base_dir_; }

 private:
  std::map<std::string, std::string> values_;
  std::filesystem::path base_dir_ = ".";
};

}  // namespace asymgauge
