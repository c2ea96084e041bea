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

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asymgauge/config.hpp"
#include "asymgauge/error.hpp"
#include "asymgauge/pipeline.hpp"

namespace {

// Remaining `--key value` or `--key=value` arguments become config overrides.
void apply_overrides(const std::vector<std::string> &extras, asymgauge::RunConfig &config) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string &arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() == 2) {
      throw asymgauge::ConfigError("unexpected argument '" + arg + "'");
    }
    std::string key = arg.substr(2);
    std::string value;
    if (auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.resize(eq);
    } else {
      if (i + 1 == extras.size()) throw asymgauge::ConfigError("override --" + key + " has no value");
      value = extras[++i];
    }
    config.set(key, value);
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Asymmetric word-relatedness evaluation"};
  app.set_version_flag("--version", asymgauge::tool_version());
  app.require_subcommand(1);

  std::string config_path;
  asymgauge::SubcommandOptions options;
  for (const auto &sub : asymgauge::subcommands()) {
    auto *cmd = app.add_subcommand(sub.name, sub.summary);
    cmd->add_option("--config", config_path, "run configuration file")->required();
    cmd->allow_extras();
    if (sub.name == "cond-lm") {
      cmd->add_flag("--emit-tasks", options.emit_tasks, "write scoring tasks and stop");
      cmd->add_flag("--consume-scores", options.consume_scores,
                    "read scorer results from scores_dir");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : asymgauge::kExitValidation;
  }

  auto *cmd = app.get_subcommands().front();
  try {
    auto config = asymgauge::RunConfig::load(config_path);
    apply_overrides(cmd->remaining(), config);
    asymgauge::run_subcommand(cmd->get_name(), config, options);
  } catch (const std::exception &e) {
    int code = asymgauge::exit_code_for(e);
    std::string kind = "internal";
    if (const auto *err = dynamic_cast<const asymgauge::Error *>(&e)) kind = err->kind();
    std::fprintf(stderr, "asymgauge: %s error: %s\n", kind.c_str(), e.what());
    return code;
  }
  return asymgauge::kExitOk;
}
