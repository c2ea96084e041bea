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

#include "asymgauge/static_conditionals.hpp"

namespace {

struct Table {
  asymgauge::VectorTable vectors{300};
  asymgauge::WordSet support;

  explicit Table(std::size_t words) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<double> v(300);
    for (std::size_t i = 0; i < words; ++i) {
      for (auto &x : v) x = g(rng);
      std::string w = "w" + std::to_string(i);
      vectors.add(w, v);
      support.insert(w);
    }
  }
};

// Uncached normalizer: one softmax over the whole support per call.
void BM_SoftmaxNormalizer(benchmark::State &state) {
  Table t(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(asymgauge::conditional(t.vectors, "w0", "w1", t.support));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SoftmaxNormalizer)->Arg(1000)->Arg(10000);

void BM_CachedConditional(benchmark::State &state) {
  Table t(10000);
  asymgauge::StaticConditionalModel model(t.vectors, t.support);
  model.conditional("w0", "w1");
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.conditional("w0", "w" + std::to_string(++i % 10000)));
  }
}
BENCHMARK(BM_CachedConditional);

}  // namespace
