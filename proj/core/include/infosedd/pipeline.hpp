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

#pragma once

#include <cstdint>

#include <nlohmann/json.hpp>

#include "infosedd/dataset.hpp"
#include "infosedd/estimators.hpp"
#include "infosedd/schedule.hpp"
#include "infosedd/score_net.hpp"
#include "infosedd/trainer.hpp"

namespace infosedd {

/// Train-then-estimate settings. `arch.length` and `arch.vocab` are taken
/// from the dataset.
struct PipelineConfig {
  NetArchitecture arch;
  NoiseSchedule schedule = NoiseSchedule::geometric();
  TrainConfig train;
  EstimatorConfig estimator;
  std::uint64_t net_seed = 0;
};

struct PipelineResult {
  EstimateReport report;
  TrainTrace trace;
};

/// Uniform row draws from `data`. The dataset must outlive the result.
SampleFn dataset_sampler(const Dataset& data);

/// Trains one joint network on `data` (which must carry a block split)
/// and estimates I(X; Y) with it.
PipelineResult run_mi_pipeline(const Dataset& data, const PipelineConfig& config);
/// Trains on `data` and estimates its entropy.
PipelineResult run_entropy_pipeline(const Dataset& data, const PipelineConfig& config);

NetArchitecture architecture_for(const Dataset& data, NetArchitecture arch);

}  // namespace infosedd
