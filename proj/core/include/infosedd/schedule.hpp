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

#include <nlohmann/json.hpp>
#include <string>

namespace infosedd {

/// Lower end of every sampled time interval. The unmasking ratio diverges at
/// t = 0, so Monte Carlo and quadrature work on [kTimeEpsilon, T].
inline constexpr double kTimeEpsilon = 1e-5;

enum class ScheduleKind { kGeometric, kConstant };

/// Masking-rate schedule sigma(t) and its integral sigma_bar(t) on [0, T].
///
/// Geometric: sigma_bar(t) = sigma_min * ((sigma_max / sigma_min)^(t/T) - 1),
/// so sigma_bar(0) = 0 (zero residual) and sigma_bar(T) = sigma_max - sigma_min.
/// Constant: sigma(t) = sigma_max, sigma_bar(t) = sigma_max * t (zero residual;
/// sigma_min is carried for serialization only and must equal sigma_max).
class NoiseSchedule {
 public:
  static NoiseSchedule geometric(double sigma_min = 1e-3,
                                 double sigma_max = 20.0,
                                 double horizon = 1.0);
  static NoiseSchedule constant(double rate, double horizon = 1.0);

  ScheduleKind kind() const { return kind_; }
  double sigma_min() const { return sigma_min_; }
  double sigma_max() const { return sigma_max_; }
  double horizon() const { return horizon_; }

  /// Instantaneous masking rate; throws DomainError outside [0, T].
  double sigma(double t) const;
  /// Integrated rate; throws DomainError outside [0, T].
  double sigma_bar(double t) const;

  /// 1 - exp(-sigma_bar(T)): per-token masking probability at the horizon.
  double terminal_absorption() const;
  /// True when the terminal distribution is (numerically) all-MASK.
  bool is_near_absorbing() const { return terminal_absorption() >= 0.999; }

  nlohmann::json to_json() const;
  static NoiseSchedule from_json(const nlohmann::json& j);

  bool operator==(const NoiseSchedule&) const = default;

 private:
  NoiseSchedule(ScheduleKind kind, double sigma_min, double sigma_max,
                double horizon);
  void check_time(double t) const;

  ScheduleKind kind_;
  double sigma_min_;
  double sigma_max_;
  double horizon_;
  double log_ratio_;  // ln(sigma_max / sigma_min), geometric only
};

double sigma_bar(const NoiseSchedule& schedule, double t);

struct TokenKernel {
  double keep_prob;    // exp(-sigma_bar)
  double absorb_prob;  // 1 - exp(-sigma_bar)
};

/// Per-token perturbation kernel of the absorbing process at time t.
TokenKernel token_kernel(const NoiseSchedule& schedule, double t);

/// exp(-sigma_bar) / (1 - exp(-sigma_bar)) = 1 / (exp(sigma_bar) - 1): the
/// ratio contributed by unmasking one position under the perturbation
/// kernel. DomainError when sigma_bar == 0.
double unmask_kernel_ratio(double sigma_bar);

/// Score ratio u_t(x) / u_t(MASK) for the uniform distribution over N
/// symbols: 1 / (N (exp(sigma_bar(t)) - 1)). DomainError at sigma_bar(t) = 0.
double uniform_score_ratio(const NoiseSchedule& schedule, double t, int vocab);

/// K(a) = a (ln a - 1). DomainError for a <= 0.
double k_term(double a);

/// K extended by continuity to K(0) = 0; used for kernel ratios that
/// vanish. DomainError for a < 0.
double k_term_or_zero(double a);

}  // namespace infosedd
