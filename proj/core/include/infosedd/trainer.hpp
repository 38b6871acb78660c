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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "infosedd/dataset.hpp"
#include "infosedd/error.hpp"
#include "infosedd/score_net.hpp"

namespace infosedd {

struct TrainConfig {
  int steps = 2000;
  int batch_size = 256;
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double grad_clip = 1.0;  // global L2 norm; <= 0 disables
  std::uint64_t seed = 0;
  int eval_every = 100;
  /// Cosine decay of the learning rate to 0 over `steps`.
  bool cosine_decay = true;
  /// Times in a batch are stratified over [eps, T] (one per equal bin).
  bool stratified_time = true;

  void validate() const;
  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

struct LossPoint {
  int step;     // 1-based step at the end of the window
  double loss;  // mean minibatch loss over the window
};

struct TrainTrace {
  std::vector<LossPoint> points;
  void write_csv(const std::string& path) const;
};

/// Thrown when the loss or the parameters stop being finite. The network
/// passed to `train` is left holding the last finite parameters.
class TrainingDiverged : public NumericFault {
 public:
  TrainingDiverged(int step, TrainTrace trace)
      : NumericFault("training diverged at step " + std::to_string(step)),
        step_(step),
        trace_(std::move(trace)) {}
  int step() const { return step_; }
  const TrainTrace& trace() const { return trace_; }

 private:
  int step_;
  TrainTrace trace_;
};

/// Adam on the denoising score-entropy loss. Each step draws a fresh
/// minibatch of rows, fresh times and fresh perturbations from a single
/// seeded stream, so runs are reproducible.
template <typename Scalar>
TrainTrace train(ScoreNetT<Scalar>& net, const Dataset& data,
                 const TrainConfig& config);

/// Builds one training batch. Exposed for tests.
DseBatch make_batch(const Dataset& data, const NoiseSchedule& schedule,
                    int rows, bool stratified_time, Rng& rng);

extern template TrainTrace train<float>(ScoreNetT<float>&, const Dataset&,
                                        const TrainConfig&);
extern template TrainTrace train<double>(ScoreNetT<double>&, const Dataset&,
                                         const TrainConfig&);

}  // namespace infosedd
