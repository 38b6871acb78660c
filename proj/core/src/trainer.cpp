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

#include "infosedd/trainer.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "infosedd/ctmc.hpp"

namespace infosedd {

void TrainConfig::validate() const {
  if (steps < 1) throw InvalidInput("train: steps must be >= 1");
  if (batch_size < 1) throw InvalidInput("train: batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw InvalidInput("train: learning_rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
    throw InvalidInput("train: Adam betas must lie in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw InvalidInput("train: adam_eps must be > 0");
  if (eval_every < 1) throw InvalidInput("train: eval_every must be >= 1");
}

nlohmann::json TrainConfig::to_json() const {
  return nlohmann::json{{"steps", steps},
                        {"batch_size", batch_size},
                        {"learning_rate", learning_rate},
                        {"adam_betas", {beta1, beta2}},
                        {"adam_eps", adam_eps},
                        {"grad_clip", grad_clip},
                        {"seed", seed},
                        {"eval_every", eval_every},
                        {"cosine_decay", cosine_decay},
                        {"stratified_time", stratified_time}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  try {
    c.steps = j.value("steps", c.steps);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    if (j.contains("adam_betas")) {
      c.beta1 = j.at("adam_betas").at(0).get<double>();
      c.beta2 = j.at("adam_betas").at(1).get<double>();
    }
    c.adam_eps = j.value("adam_eps", c.adam_eps);
    c.grad_clip = j.value("grad_clip", c.grad_clip);
    c.seed = j.value("seed", c.seed);
    c.eval_every = j.value("eval_every", c.eval_every);
    c.cosine_decay = j.value("cosine_decay", c.cosine_decay);
    c.stratified_time = j.value("stratified_time", c.stratified_time);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("train config: ") + e.what());
  }
  c.validate();
  return c;
}

void TrainTrace::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out.precision(17);
  out << "step,loss\n";
  for (const auto& p : points) out << p.step << ',' << p.loss << '\n';
}

DseBatch make_batch(const Dataset& data, const NoiseSchedule& schedule,
                    int rows, bool stratified_time, Rng& rng) {
  const int m = data.length();
  const Token mask = static_cast<Token>(data.vocab());
  const double lo = kTimeEpsilon;
  const double span = schedule.horizon() - lo;
  DseBatch batch;
  batch.rows = rows;
  batch.clean.resize(static_cast<std::size_t>(rows) * m);
  batch.perturbed.resize(batch.clean.size());
  batch.times.resize(rows);
  for (int b = 0; b < rows; ++b) {
    const auto src = data.row(rng.below(data.rows()));
    std::span<Token> clean(batch.clean.data() + static_cast<std::size_t>(b) * m, m);
    std::copy(src.begin(), src.end(), clean.begin());
    const double u = rng.uniform();
    const double t = stratified_time ? lo + span * (b + u) / rows : lo + span * u;
    batch.times[b] = std::min(t, schedule.horizon());
    const double keep = token_kernel(schedule, batch.times[b]).keep_prob;
    perturb_tokens(clean, mask, keep, rng,
                   std::span<Token>(batch.perturbed.data() +
                                        static_cast<std::size_t>(b) * m,
                                    m));
  }
  return batch;
}

template <typename Scalar>
TrainTrace train(ScoreNetT<Scalar>& net, const Dataset& data,
                 const TrainConfig& config) {
  config.validate();
  if (data.empty()) throw InvalidInput("train: empty dataset");
  if (data.length() != net.length() || data.vocab() != net.vocab()) {
    throw ShapeMismatch("train: dataset shape does not match the network");
  }
  using Vector = typename ScoreNetT<Scalar>::Vector;
  Vector& params = net.parameters();
  const Eigen::Index n = params.size();
  Vector grad = Vector::Zero(n);
  Vector m1 = Vector::Zero(n);
  Vector m2 = Vector::Zero(n);
  Vector last_good = params;

  Rng rng(config.seed);
  TrainTrace trace;
  double window_sum = 0.0;
  int window_count = 0;
  double b1_pow = 1.0;
  double b2_pow = 1.0;

  for (int step = 1; step <= config.steps; ++step) {
    const DseBatch batch = make_batch(data, net.schedule(), config.batch_size,
                                      config.stratified_time, rng);
    double loss = 0.0;
    try {
      loss = net.dse_loss(batch, &grad);
    } catch (const NumericFault&) {
      params = last_good;
      throw TrainingDiverged(step, trace);
    }
    if (!std::isfinite(loss) || !grad.allFinite()) {
      params = last_good;
      throw TrainingDiverged(step, trace);
    }
    last_good = params;

    if (config.grad_clip > 0.0) {
      const double norm = static_cast<double>(grad.norm());
      if (norm > config.grad_clip) grad *= static_cast<Scalar>(config.grad_clip / norm);
    }
    double lr = config.learning_rate;
    if (config.cosine_decay) {
      lr *= 0.5 * (1.0 + std::cos(std::numbers::pi * (step - 1) / config.steps));
    }
    b1_pow *= config.beta1;
    b2_pow *= config.beta2;
    const Scalar b1 = static_cast<Scalar>(config.beta1);
    const Scalar b2 = static_cast<Scalar>(config.beta2);
    m1 = b1 * m1 + (Scalar(1) - b1) * grad;
    m2 = b2 * m2 + (Scalar(1) - b2) * grad.cwiseAbs2();
    const Scalar step_size = static_cast<Scalar>(lr / (1.0 - b1_pow));
    const Scalar v_scale = static_cast<Scalar>(1.0 / (1.0 - b2_pow));
    const Scalar eps = static_cast<Scalar>(config.adam_eps);
    params.array() -=
        step_size * m1.array() / ((m2.array() * v_scale).sqrt() + eps);
    if (!params.allFinite()) {
      params = last_good;
      throw TrainingDiverged(step, trace);
    }

    window_sum += loss;
    ++window_count;
    if (step % config.eval_every == 0 || step == config.steps) {
      trace.points.push_back({step, window_sum / window_count});
      window_sum = 0.0;
      window_count = 0;
    }
  }
  return trace;
}

template TrainTrace train<float>(ScoreNetT<float>&, const Dataset&,
                                 const TrainConfig&);
template TrainTrace train<double>(ScoreNetT<double>&, const Dataset&,
                                  const TrainConfig&);

}  // namespace infosedd
