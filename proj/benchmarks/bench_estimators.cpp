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

#include "infosedd/estimators.hpp"
#include "infosedd/exact.hpp"
#include "infosedd/synth.hpp"

namespace {

using namespace infosedd;

void BM_ExactScoreRatios(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Rng rng(1);
  const auto p = random_pmf(m, 2, 1, rng);
  const auto sched = NoiseSchedule::geometric();
  const ExactScoreSource src(p, sched);
  std::vector<Token> states(static_cast<std::size_t>(256) * m);
  for (auto& t : states) t = static_cast<Token>(rng.below(3));
  const std::vector<double> times(256, 0.5);
  std::vector<double> out(states.size() * 2);
  for (auto _ : state) {
    src.score_ratios(states, times, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_ExactScoreRatios)->Arg(4)->Arg(10)->Arg(16);

void BM_ExactMiEstimate(benchmark::State& state) {
  Rng rng(2);
  const auto joint = random_pmf(4, 3, 2, rng);
  const auto sched = NoiseSchedule::geometric();
  const ExactScoreSource src(joint, sched);
  const PmfSampler sampler(joint);
  EstimatorConfig cfg;
  cfg.n_samples = state.range(0);
  const SampleFn draw = [&](Rng& r, std::span<Token> out) { sampler.sample(r, out); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_mi(src, 2, draw, sched, cfg).estimate);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExactMiEstimate)->Arg(10000);

void BM_EvolveJoint(benchmark::State& state) {
  ESConfig cfg;
  cfg.target_mi = 0.5;
  cfg.tolerance = 1e-4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_joint(cfg, static_cast<int>(state.range(0))).achieved_mi);
  }
}
BENCHMARK(BM_EvolveJoint)->Arg(2)->Arg(8);

}  // namespace
