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

#include "asymgauge/config.hpp"

#include <fstream>

#include "asymgauge/error.hpp"
#include "asymgauge/io.hpp"

namespace asymgauge {

RunConfig RunConfig::parse(std::istream &in, std::filesystem::path base_dir) {
  RunConfig c;
  c.base_dir_ = std::move(base_dir);
  std::string line;
  std::size_t lineno = 0;
  while (io::read_line(in, line)) {
    ++lineno;
    auto body = io::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", lineno);
    std::string key(io::trim(body.substr(0, eq)));
    if (key.empty()) throw ParseError("empty key", lineno);
    if (c.values_.count(key)) {
      throw ConfigError("key '" + key + "' set twice (line " + std::to_string(lineno) + ")");
    }
    c.values_[key] = std::string(io::trim(body.substr(eq + 1)));
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  try {
    return parse(in, base);
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void RunConfig::set(const std::string &key, const std::string &value) { values_[key] = value; }

std::string RunConfig::get(const std::string &key) const {
  auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) {
    throw ConfigError("missing required config key '" + key + "'");
  }
  return it->second;
}

std::string RunConfig::get_or(const std::string &key, const std::string &fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

long long RunConfig::get_int(const std::string &key, long long fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  long long v = 0;
  if (!io::parse_int(it->second, v)) {
    throw ConfigError("config key '" + key + "' is not an integer: '" + it->second + "'");
  }
  return v;
}

double RunConfig::get_double(const std::string &key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  double v = 0.0;
  if (!io::parse_double(it->second, v)) {
    throw ConfigError("config key '" + key + "' is not a number: '" + it->second + "'");
  }
  return v;
}

std::vector<std::string> RunConfig::get_list(const std::string &key) const {
  std::vector<std::string> out;
  auto it = values_.find(key);
  if (it == values_.end()) return out;
  for (auto item : io::split(it->second, ',')) {
    item = io::trim(item);
    if (!item.empty()) out.emplace_back(item);
  }
  return out;
}

std::vector<double> RunConfig::get_double_list(const std::string &key,
                                               const std::vector<double> &fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto &item : get_list(key)) {
    double v = 0.0;
    if (!io::parse_double(item, v)) {
      throw ConfigError("config key '" + key + "' has a non-numeric item '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::filesystem::path RunConfig::resolve(const std::filesystem::path &p) const {
  return p.is_absolute() ? p : base_dir_ / p;
}

std::filesystem::path RunConfig::path(const std::string &key) const { return resolve(get(key)); }

bool RunConfig::is_path_key(const std::string &key) {
  auto ends_with = [&](std::string_view suffix) {
    return key.size() >= suffix.size() &&
           key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  return key == "conceptnet" || key == "corpus" || ends_with(".path") ||
         ends_with(".context_path");
}

void RunConfig::validate_paths() const {
  for (const auto &[key, value] : values_) {
    if (!is_path_key(key) || value.empty()) continue;
    if (!std::filesystem::exists(resolve(value))) {
      throw ConfigError("config key '" + key + "' names a missing path: " +
                        resolve(value).string());
    }
  }
}

std::string RunConfig::hash() const {
  std::string material;
  for (const auto &[key, value] : values_) material += key + "=" + value + "\n";
  return io::hex64(io::fnv1a64(material));
}

}  // namespace asymgauge
