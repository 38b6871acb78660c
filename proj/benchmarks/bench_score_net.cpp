// Copyright 2026 The infosedd Authors
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

#include "infosedd/score_net.hpp"
#include "infosedd/trainer.hpp"

namespace {

using namespace infosedd;

NetArchitecture arch_for(int m, int width) {
  NetArchitecture a;
  a.length = m;
  a.vocab = 2;
  a.width = width;
  a.depth = 2;
  return a;
}

Dataset random_rows(int m, int rows) {
  Rng rng(1);
  Dataset d(m, 2);
  std::vector<Token> row(m);
  for (int r = 0; r < rows; ++r) {
    for (auto& t : row) t = static_cast<Token>(rng.below(2));
    d.append(row);
  }
  return d;
}

void BM_ScoreRatios(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int width = static_cast<int>(state.range(1));
  const auto sched = NoiseSchedule::geometric();
  const ScoreNet net(arch_for(m, width), sched, 2);
  const auto data = random_rows(m, 256);
  Rng rng(3);
  const auto batch = make_batch(data, sched, 256, true, rng);
  std::vector<double> out(static_cast<std::size_t>(256) * m * 2);
  for (auto _ : state) {
    net.score_ratios(batch.perturbed, batch.times, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_ScoreRatios)->Args({2, 64})->Args({20, 128})->Args({100, 256});

void BM_LossAndGradient(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int width = static_cast<int>(state.range(1));
  const auto sched = NoiseSchedule::geometric();
  const ScoreNet net(arch_for(m, width), sched, 4);
  const auto data = random_rows(m, 256);
  Rng rng(5);
  const auto batch = make_batch(data, sched, 256, true, rng);
  ScoreNet::Vector grad;
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.dse_loss(batch, &grad));
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_LossAndGradient)->Args({2, 64})->Args({20, 128})->Args({100, 256});

}  // namespace
