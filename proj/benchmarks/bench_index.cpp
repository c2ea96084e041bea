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

#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "asymgauge/corpus_index.hpp"

namespace {

std::vector<asymgauge::Document> synthetic_corpus(std::size_t paragraphs) {
  std::mt19937 rng(7);
  std::vector<std::string> vocab;
  for (int i = 0; i < 2000; ++i) vocab.push_back("w" + std::to_string(i));
  std::string text;
  for (std::size_t p = 0; p < paragraphs; ++p) {
    for (int t = 0; t < 40; ++t) {
      // Skewed draw so a few words are frequent.
      std::size_t k = rng() % vocab.size();
      text += vocab[k * k / vocab.size()];
      text += t % 12 == 11 ? ". " : " ";
    }
    text += "\n\n";
  }
  return {{"doc", std::move(text)}};
}

void BM_IndexBuild(benchmark::State &state) {
  auto docs = synthetic_corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto store = asymgauge::ParagraphStore::build(docs);
    benchmark::DoNotOptimize(store.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IndexBuild)->Arg(1000)->Arg(10000);

void BM_ContextsForPair(benchmark::State &state) {
  auto store = asymgauge::ParagraphStore::build(synthetic_corpus(20000));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto sample = store.contexts_for_pair("w0", "w1", static_cast<std::size_t>(state.range(0)), ++seed);
    benchmark::DoNotOptimize(sample.records.data());
  }
}
BENCHMARK(BM_ContextsForPair)->Arg(10)->Arg(1000);

}  // namespace
