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

#include "infosedd/schedule.hpp"

#include <cmath>
#include <string>

#include "infosedd/error.hpp"

namespace infosedd {

NoiseSchedule::NoiseSchedule(ScheduleKind kind, double sigma_min,
                             double sigma_max, double horizon)
    : kind_(kind),
      sigma_min_(sigma_min),
      sigma_max_(sigma_max),
      horizon_(horizon),
      log_ratio_(0.0) {
  if (!(sigma_min > 0.0) || !(sigma_max > 0.0) || !(horizon > 0.0) ||
      !std::isfinite(sigma_min) || !std::isfinite(sigma_max) ||
      !std::isfinite(horizon)) {
    throw DomainError("NoiseSchedule: sigma_min, sigma_max, T must be > 0");
  }
  if (kind == ScheduleKind::kGeometric) {
    if (!(sigma_max > sigma_min)) {
      throw DomainError("NoiseSchedule: geometric needs sigma_max > sigma_min");
    }
    log_ratio_ = std::log(sigma_max / sigma_min);
  } else if (sigma_min != sigma_max) {
    throw DomainError("NoiseSchedule: constant needs sigma_min == sigma_max");
  }
}

NoiseSchedule NoiseSchedule::geometric(double sigma_min, double sigma_max,
                                       double horizon) {
  return NoiseSchedule(ScheduleKind::kGeometric, sigma_min, sigma_max,
                       horizon);
}

NoiseSchedule NoiseSchedule::constant(double rate, double horizon) {
  return NoiseSchedule(ScheduleKind::kConstant, rate, rate, horizon);
}

void NoiseSchedule::check_time(double t) const {
  if (!(t >= 0.0) || !(t <= horizon_)) {
    throw DomainError("NoiseSchedule: t=" + std::to_string(t) +
                      " outside [0, " + std::to_string(horizon_) + "]");
  }
}

double NoiseSchedule::sigma(double t) const {
  check_time(t);
  if (kind_ == ScheduleKind::kConstant) return sigma_max_;
  const double s = t / horizon_;
  return sigma_min_ * (log_ratio_ / horizon_) * std::exp(log_ratio_ * s);
}

double NoiseSchedule::sigma_bar(double t) const {
  check_time(t);
  if (kind_ == ScheduleKind::kConstant) return sigma_max_ * t;
  // expm1 keeps full relative precision near t = 0.
  return sigma_min_ * std::expm1(log_ratio_ * (t / horizon_));
}

double NoiseSchedule::terminal_absorption() const {
  return -std::expm1(-sigma_bar(horizon_));
}

nlohmann::json NoiseSchedule::to_json() const {
  return nlohmann::json{
      {"kind", kind_ == ScheduleKind::kGeometric ? "geometric" : "constant"},
      {"sigma_min", sigma_min_},
      {"sigma_max", sigma_max_},
      {"T", horizon_}};
}

NoiseSchedule NoiseSchedule::from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const double horizon = j.value("T", 1.0);
    if (kind == "geometric") {
      return geometric(j.value("sigma_min", 1e-3), j.value("sigma_max", 20.0),
                       horizon);
    }
    if (kind == "constant") {
      const double rate = j.at("sigma_max").get<double>();
      return constant(rate, horizon);
    }
    throw FormatError("schedule: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("schedule: ") + e.what());
  }
}

double sigma_bar(const NoiseSchedule& schedule, double t) {
  return schedule.sigma_bar(t);
}

TokenKernel token_kernel(const NoiseSchedule& schedule, double t) {
  const double sb = schedule.sigma_bar(t);
  const double keep = std::exp(-sb);
  return {keep, -std::expm1(-sb)};
}

double unmask_kernel_ratio(double sigma_bar) {
  if (!(sigma_bar > 0.0)) {
    throw DomainError("unmask ratio diverges at sigma_bar = 0");
  }
  return 1.0 / std::expm1(sigma_bar);
}

double uniform_score_ratio(const NoiseSchedule& schedule, double t,
                           int vocab) {
  if (vocab < 1) throw DomainError("uniform_score_ratio: vocab must be >= 1");
  const double sb = schedule.sigma_bar(t);
  if (!(sb > 0.0)) {
    throw DomainError("uniform_score_ratio: singular at sigma_bar(t) = 0");
  }
  return 1.0 / (static_cast<double>(vocab) * std::expm1(sb));
}

double k_term(double a) {
  if (!(a > 0.0)) throw DomainError("k_term: argument must be > 0");
  return a * (std::log(a) - 1.0);
}

double k_term_or_zero(double a) {
  if (a == 0.0) return 0.0;
  if (!(a > 0.0)) throw DomainError("k_term: argument must be >= 0");
  return a * (std::log(a) - 1.0);
}

}  // namespace infosedd
