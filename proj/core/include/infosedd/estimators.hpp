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
#include <functional>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "infosedd/rng.hpp"
#include "infosedd/schedule.hpp"
#include "infosedd/score_source.hpp"

namespace infosedd {

struct EstimatorConfig {
  std::int64_t n_samples = 100000;
  int time_strata = 64;
  /// false draws t uniformly on [eps, T] with no strata.
  bool stratified = true;
  std::uint64_t seed = 0;
  /// Rows per score evaluation; also the unit of RNG stream assignment.
  int score_batch = 256;
  /// Worker threads; results do not depend on this value.
  int threads = 1;

  void validate() const;
  nlohmann::json to_json() const;
  static EstimatorConfig from_json(const nlohmann::json& j);
};

struct EstimateReport {
  std::string kind;  // "kl", "mi" or "entropy"
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // seconds
  std::string fingerprint;
  /// Entropy runs only: the KL to uniform that H was derived from.
  std::optional<double> kl_to_uniform;

  /// Everything except wall_time, so result files are reproducible.
  nlohmann::json to_json() const;
  static std::string csv_header();
  std::string csv_row(const std::string& experiment_id) const;
};

/// Draws one clean sequence x0 ~ p0 into `out`. Called concurrently with
/// distinct generators.
using SampleFn = std::function<void(Rng&, std::span<Token>)>;

/// Per-entry divergence term K(sp) + sq - sp ln sq, computed as
/// sp ln(sp / sq) - sp + sq. Throws AbsoluteContinuityViolation when
/// sq = 0 < sp.
double score_entropy_term(double sp, double sq);

using DivergenceTerm = double (*)(double sp, double sq);

/// KL(p0 || q0) from two score sources sharing (M, N).
EstimateReport estimate_kl(const ScoreSource& p, const ScoreSource& q,
                           const SampleFn& sample, const NoiseSchedule& schedule,
                           const EstimatorConfig& config);

/// I(X; Y) for X = tokens [0, block_split), Y = the rest, from a single
/// joint source, using joint ratios with the other block fully masked as
/// marginal ratios.
EstimateReport estimate_mi(const ScoreSource& joint, int block_split,
                           const SampleFn& sample, const NoiseSchedule& schedule,
                           const EstimatorConfig& config);

/// H(p0) = M ln N - KL(p0 || uniform). `estimate` holds H and
/// `kl_to_uniform` the KL.
EstimateReport estimate_entropy(const ScoreSource& source,
                                const SampleFn& sample,
                                const NoiseSchedule& schedule,
                                const EstimatorConfig& config);

namespace detail {
/// Same estimators with the divergence term swapped out. Used to check that
/// the self-test notices a broken term.
EstimateReport estimate_mi(const ScoreSource& joint, int block_split,
                           const SampleFn& sample, const NoiseSchedule& schedule,
                           const EstimatorConfig& config, DivergenceTerm term);
EstimateReport estimate_entropy(const ScoreSource& source,
                                const SampleFn& sample,
                                const NoiseSchedule& schedule,
                                const EstimatorConfig& config,
                                DivergenceTerm term);
}  // namespace detail

/// 64-bit FNV-1a of a canonical JSON dump, as 16 hex digits.
std::string fingerprint(const nlohmann::json& j);

}  // namespace infosedd
