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

#include <exception>
#include <string>
#include <vector>

#include "asymgauge/config.hpp"

namespace asymgauge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDependency = 3;
inline constexpr int kExitScorer = 4;
inline constexpr int kExitInternal = 5;

struct SubcommandOptions {
  // cond-lm split mode: write tasks for an offline scorer, or read its
  // results instead of calling a scorer.
  bool emit_tasks = false;
  bool consume_scores = false;
};

struct Subcommand {
  std::string name;
  std::string summary;
};

const std::vector<Subcommand> &subcommands();

// Runs one pipeline stage. Artifacts go under the config's `out_dir`;
// progress goes to stderr. Throws asymgauge::Error subclasses.
void run_subcommand(const std::string &name, const RunConfig &config,
                    const SubcommandOptions &options = {});

// Exit status for an exception escaping run_subcommand.
int exit_code_for(const std::exception &error);

std::string tool_version();

}  // namespace asymgauge
