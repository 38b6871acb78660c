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

#include "infosedd/ising.hpp"

namespace {

using namespace infosedd;

void BM_MetropolisSweep(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const IsingSystem sys{l, 1.0, 1.0, 2.5};
  MetropolisChain chain(sys, SpinConfig::all_up(l), Rng(1));
  for (auto _ : state) {
    chain.sweep();
    benchmark::DoNotOptimize(chain.accepted());
  }
  state.SetItemsProcessed(state.iterations() * l * l);
}
BENCHMARK(BM_MetropolisSweep)->Arg(10)->Arg(20);

void BM_OnsagerEntropy(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(onsager_entropy_per_site(2.5));
}
BENCHMARK(BM_OnsagerEntropy);

}  // namespace
