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

#include "asymgauge/metrics.hpp"

namespace {

void BM_Spearman(benchmark::State &state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = g(rng);
    y[i] = x[i] + g(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(asymgauge::spearman(x, y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Spearman)->Arg(100)->Arg(1000)->Arg(100000);

void BM_ExactPValue(benchmark::State &state) {
  std::vector<double> x = {1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<double> y = {2, 1, 4, 3, 6, 5, 8, 7};
  for (auto _ : state) benchmark::DoNotOptimize(asymgauge::spearman_p_value_exact(x, y));
}
BENCHMARK(BM_ExactPValue);

}  // namespace
