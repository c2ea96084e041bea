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

// Deterministic stand-in for the masked-LM scorer process. Reads request
// batches on stdin and answers on stdout; see asymgauge::MockScorer for the
// probability it assigns.
#include <cstdio>
#include <iostream>
#include <set>
#include <string>

#include "asymgauge/error.hpp"
#include "asymgauge/pipeline.hpp"
#include "asymgauge/scoring.hpp"

int main(int argc, char **argv) {
  // Arguments are target words to refuse as multi-token.
  std::set<std::string> refuse(argv + 1, argv + argc);
  asymgauge::MockScorer scorer(std::move(refuse));
  std::ios::sync_with_stdio(false);
  try {
    asymgauge::serve(scorer, std::cin, std::cout);
  } catch (const std::exception &e) {
    std::fprintf(stderr, "mock_scorer: %s\n", e.what());
    return asymgauge::exit_code_for(e);
  }
  return 0;
}
