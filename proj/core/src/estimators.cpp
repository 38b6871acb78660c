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

#include "infosedd/estimators.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "infosedd/ctmc.hpp"
#include "infosedd/error.hpp"

namespace infosedd {

void EstimatorConfig::validate() const {
  if (n_samples < 1) throw InvalidInput("estimator: n_samples must be >= 1");
  if (time_strata < 1) throw InvalidInput("estimator: time_strata must be >= 1");
  if (score_batch < 1) throw InvalidInput("estimator: score_batch must be >= 1");
  if (threads < 1) throw InvalidInput("estimator: threads must be >= 1");
}

nlohmann::json EstimatorConfig::to_json() const {
  return nlohmann::json{{"n_samples", n_samples},     {"time_strata", time_strata},
                        {"stratified", stratified},   {"seed", seed},
                        {"score_batch", score_batch}};
}

EstimatorConfig EstimatorConfig::from_json(const nlohmann::json& j) {
  EstimatorConfig c;
  try {
    c.n_samples = j.value("n_samples", c.n_samples);
    c.time_strata = j.value("time_strata", c.time_strata);
    c.stratified = j.value("stratified", c.stratified);
    c.seed = j.value("seed", c.seed);
    c.score_batch = j.value("score_batch", c.score_batch);
    c.threads = j.value("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("estimator config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json EstimateReport::to_json() const {
  nlohmann::json j{{"kind", kind},
                   {"estimate", estimate},
                   {"stderr", stderr_},
                   {"n_samples", n_samples},
                   {"seed", seed},
                   {"fingerprint", fingerprint}};
  if (kl_to_uniform) j["kl_to_uniform"] = *kl_to_uniform;
  return j;
}

std::string EstimateReport::csv_header() {
  return "experiment_id,estimate,stderr,n_samples,seed";
}

std::string EstimateReport::csv_row(const std::string& experiment_id) const {
  char buf[64];
  std::ostringstream out;
  out << experiment_id << ',';
  std::snprintf(buf, sizeof buf, "%.17g", estimate);
  out << buf << ',';
  std::snprintf(buf, sizeof buf, "%.17g", stderr_);
  out << buf << ',' << n_samples << ',' << seed;
  return out.str();
}

double score_entropy_term(double sp, double sq) {
  if (sq == 0.0) {
    if (sp > 0.0) {
      throw AbsoluteContinuityViolation(
          "estimator: reference ratio is 0 where the target ratio is positive");
    }
    return 0.0;
  }
  if (sp == 0.0) return sq;
  return sp * std::log(sp / sq) - sp + sq;
}

std::string fingerprint(const nlohmann::json& j) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

enum class Mode { kKl, kMi, kEntropy };

struct Job {
  Mode mode;
  const ScoreSource* p;
  const ScoreSource* q;  // kKl only
  int split;             // kMi only
  DivergenceTerm term;
};

struct Moments {
  double mean;
  double stderr_;
};

Moments summarize(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

/// Fills contributions[first .. first + rows) for one chunk.
void run_chunk(const Job& job, const SampleFn& sample,
               const NoiseSchedule& schedule, const EstimatorConfig& config,
               std::int64_t chunk, std::vector<double>& contributions) {
  const int m = job.p->length();
  const int n = job.p->vocab();
  const Token mask = static_cast<Token>(n);
  const std::int64_t first = chunk * config.score_batch;
  const int rows = static_cast<int>(
      std::min<std::int64_t>(config.score_batch, config.n_samples - first));
  const double lo = kTimeEpsilon;
  const double span = schedule.horizon() - lo;

  Rng rng = Rng::stream(config.seed, static_cast<std::uint64_t>(chunk));
  std::vector<Token> clean(static_cast<std::size_t>(m));
  std::vector<Token> states(static_cast<std::size_t>(rows) * m);
  std::vector<double> times(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r) {
    sample(rng, clean);
    const double u = rng.uniform();
    double t;
    if (config.stratified) {
      const std::int64_t stratum = (first + r) % config.time_strata;
      t = lo + span * (static_cast<double>(stratum) + u) / config.time_strata;
    } else {
      t = lo + span * u;
    }
    times[r] = std::min(t, schedule.horizon());
    const double keep = token_kernel(schedule, times[r]).keep_prob;
    perturb_tokens(clean, mask, keep, rng,
                   std::span<Token>(states.data() + static_cast<std::size_t>(r) * m, m));
  }

  const std::size_t stride = static_cast<std::size_t>(m) * n;
  std::vector<double> sp(rows * stride);
  job.p->score_ratios(states, times, sp);

  std::vector<double> sq;
  std::vector<double> sq_y;  // kMi: ratios with X masked
  if (job.mode == Mode::kKl) {
    sq.resize(sp.size());
    job.q->score_ratios(states, times, sq);
  } else if (job.mode == Mode::kMi) {
    std::vector<Token> masked_y = states;
    std::vector<Token> masked_x = states;
    for (int r = 0; r < rows; ++r) {
      Token* ry = masked_y.data() + static_cast<std::size_t>(r) * m;
      Token* rx = masked_x.data() + static_cast<std::size_t>(r) * m;
      for (int i = job.split; i < m; ++i) ry[i] = mask;
      for (int i = 0; i < job.split; ++i) rx[i] = mask;
    }
    sq.resize(sp.size());
    sq_y.resize(sp.size());
    job.p->score_ratios(masked_y, times, sq);
    job.p->score_ratios(masked_x, times, sq_y);
  }

  for (int r = 0; r < rows; ++r) {
    const Token* x = states.data() + static_cast<std::size_t>(r) * m;
    const double weight = span * schedule.sigma(times[r]);
    const double uniform_q =
        job.mode == Mode::kEntropy ? uniform_score_ratio(schedule, times[r], n) : 0.0;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      if (x[i] != mask) continue;
      const std::size_t base = r * stride + static_cast<std::size_t>(i) * n;
      for (int v = 0; v < n; ++v) {
        const double p = sp[base + v];
        double q;
        switch (job.mode) {
          case Mode::kKl: q = sq[base + v]; break;
          case Mode::kMi: q = i < job.split ? sq[base + v] : sq_y[base + v]; break;
          default: q = uniform_q; break;
        }
        acc += job.term(p, q);
      }
    }
    const double value = weight * acc;
    if (!std::isfinite(value)) {
      throw NumericFault("estimator: non-finite per-sample contribution");
    }
    contributions[first + r] = value;
  }
}

EstimateReport run(const Job& job, const SampleFn& sample,
                   const NoiseSchedule& schedule, const EstimatorConfig& config,
                   const char* kind, const nlohmann::json& extra) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::int64_t chunks =
      (config.n_samples + config.score_batch - 1) / config.score_batch;
  std::vector<double> contributions(static_cast<std::size_t>(config.n_samples));

  const int workers = static_cast<int>(
      std::min<std::int64_t>(config.threads, chunks));
  if (workers <= 1) {
    for (std::int64_t c = 0; c < chunks; ++c) {
      run_chunk(job, sample, schedule, config, c, contributions);
    }
  } else {
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (std::int64_t c = next++; c < chunks; c = next++) {
            run_chunk(job, sample, schedule, config, c, contributions);
          }
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = chunks;
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  const Moments mom = summarize(contributions);
  EstimateReport report;
  report.kind = kind;
  report.estimate = mom.mean;
  report.stderr_ = mom.stderr_;
  report.n_samples = config.n_samples;
  report.seed = config.seed;
  nlohmann::json fp = extra;
  fp["kind"] = kind;
  fp["estimator"] = config.to_json();
  fp["schedule"] = schedule.to_json();
  fp["M"] = job.p->length();
  fp["N"] = job.p->vocab();
  report.fingerprint = fingerprint(fp);
  report.wall_time = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return report;
}

void check_schedule(const NoiseSchedule& schedule) {
  if (!schedule.is_near_absorbing()) {
    throw InvalidInput(
        "estimator: schedule does not reach near-total absorption at T");
  }
}

}  // namespace

EstimateReport estimate_kl(const ScoreSource& p, const ScoreSource& q,
                           const SampleFn& sample, const NoiseSchedule& schedule,
                           const EstimatorConfig& config) {
  if (p.length() != q.length() || p.vocab() != q.vocab()) {
    throw ShapeMismatch("estimate_kl: sources differ in (M, N)");
  }
  check_schedule(schedule);
  return run({Mode::kKl, &p, &q, 0, score_entropy_term}, sample, schedule,
             config, "kl", nlohmann::json::object());
}

EstimateReport detail::estimate_mi(const ScoreSource& joint, int block_split,
                                   const SampleFn& sample,
                                   const NoiseSchedule& schedule,
                                   const EstimatorConfig& config,
                                   DivergenceTerm term) {
  if (block_split < 1 || block_split >= joint.length()) {
    throw InvalidInput("estimate_mi: block_split must lie in [1, M)");
  }
  check_schedule(schedule);
  return run({Mode::kMi, &joint, nullptr, block_split, term}, sample, schedule,
             config, "mi", {{"block_split", block_split}});
}

EstimateReport estimate_mi(const ScoreSource& joint, int block_split,
                           const SampleFn& sample, const NoiseSchedule& schedule,
                           const EstimatorConfig& config) {
  return detail::estimate_mi(joint, block_split, sample, schedule, config,
                             score_entropy_term);
}

EstimateReport detail::estimate_entropy(const ScoreSource& source,
                                        const SampleFn& sample,
                                        const NoiseSchedule& schedule,
                                        const EstimatorConfig& config,
                                        DivergenceTerm term) {
  check_schedule(schedule);
  EstimateReport report = run({Mode::kEntropy, &source, nullptr, 0, term},
                              sample, schedule, config, "entropy",
                              nlohmann::json::object());
  const double kl = report.estimate;
  report.kl_to_uniform = kl;
  report.estimate = source.length() * std::log(static_cast<double>(source.vocab())) - kl;
  return report;
}

EstimateReport estimate_entropy(const ScoreSource& source,
                                const SampleFn& sample,
                                const NoiseSchedule& schedule,
                                const EstimatorConfig& config) {
  return detail::estimate_entropy(source, sample, schedule, config,
                                  score_entropy_term);
}

}  // namespace infosedd
