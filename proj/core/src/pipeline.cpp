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

#include "infosedd/pipeline.hpp"

#include "infosedd/error.hpp"

namespace infosedd {

SampleFn dataset_sampler(const Dataset& data) {
  if (data.empty()) throw InvalidInput("dataset_sampler: empty dataset");
  return [sampler = DatasetSampler(data)](Rng& rng, std::span<Token> out) {
    sampler(rng, out);
  };
}

NetArchitecture architecture_for(const Dataset& data, NetArchitecture arch) {
  arch.length = data.length();
  arch.vocab = data.vocab();
  return arch;
}

namespace {

ScoreNet trained_net(const Dataset& data, const PipelineConfig& config,
                     TrainTrace& trace) {
  ScoreNet net(architecture_for(data, config.arch), config.schedule, config.net_seed);
  trace = train(net, data, config.train);
  return net;
}

}  // namespace

PipelineResult run_mi_pipeline(const Dataset& data, const PipelineConfig& config) {
  if (!data.block_split()) {
    throw InvalidInput("run_mi_pipeline: dataset has no block split");
  }
  PipelineResult result;
  const ScoreNet net = trained_net(data, config, result.trace);
  result.report = estimate_mi(net, *data.block_split(), dataset_sampler(data),
                              config.schedule, config.estimator);
  return result;
}

PipelineResult run_entropy_pipeline(const Dataset& data, const PipelineConfig& config) {
  PipelineResult result;
  const ScoreNet net = trained_net(data, config, result.trace);
  result.report = estimate_entropy(net, dataset_sampler(data), config.schedule,
                                   config.estimator);
  return result;
}

}  // namespace infosedd
