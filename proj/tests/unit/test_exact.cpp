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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "infosedd/ctmc.hpp"
#include "infosedd/error.hpp"
#include "infosedd/exact.hpp"
#include "infosedd/synth.hpp"
#include "oracles/frozen_oracles.hpp"
#include "unit/test_util.hpp"

namespace infosedd {
namespace {

ExactPMF skew_joint() {
  return ExactPMF::joint_matrix({{0.5, 0.25}, {0.1, 0.15}});
}

TEST(ExactPMF, RejectsBadInput) {
  EXPECT_THROW(ExactPMF(2, 2, {0.5, 0.5, 0.1, 0.0}), InvalidInput);
  EXPECT_THROW(ExactPMF(2, 2, {0.5, 0.5}), InvalidInput);
  EXPECT_THROW(ExactPMF(1, 2, {1.5, -0.5}), InvalidInput);
  EXPECT_THROW(ExactPMF(2, 2, {0.25, 0.25, 0.25, 0.25}, 2), InvalidInput);
  EXPECT_THROW(ExactPMF::uniform(21, 2), ScaleBoundExceeded);
  EXPECT_NO_THROW(ExactPMF::uniform(20, 2));
}

TEST(ExactPMF, IndexRoundTrip) {
  const auto p = ExactPMF::uniform(3, 4);
  for (std::uint64_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(p.index_of(p.tokens_of(i)), i);
  }
  // Last token fastest.
  const std::vector<Token> x{0, 0, 1};
  EXPECT_EQ(p.index_of(x), 1u);
  const std::vector<Token> y{1, 0, 0};
  EXPECT_EQ(p.index_of(y), 16u);
}

TEST(ExactPMF, JsonRoundTrip) {
  testing_util::TempDir dir;
  const auto p = skew_joint();
  const auto path = dir.file("skew.pmf.json");
  p.save(path);
  const auto q = ExactPMF::load(path);
  EXPECT_EQ(q.length(), 2);
  EXPECT_EQ(q.block_split(), std::optional<int>(1));
  for (std::uint64_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], q[i]);
  EXPECT_THROW(ExactPMF::load(dir.file("missing.json")), FormatError);
}

TEST(ExactEntropy, Examples) {
  EXPECT_NEAR(exact_entropy(ExactPMF::uniform(3, 2)), 3 * std::log(2.0), 1e-14);
  EXPECT_EQ(exact_entropy(ExactPMF::point_mass({1, 0, 1}, 2)), 0.0);
  const std::vector<std::vector<double>> bern(8, {0.8, 0.2});
  EXPECT_NEAR(exact_entropy(ExactPMF::product(bern)), oracle::kEightBitEntropy, 1e-12);
}

TEST(ExactMi, Examples) {
  EXPECT_NEAR(exact_mi(skew_joint()), oracle::kSkewJointMi, 1e-14);
  EXPECT_NEAR(exact_mi(ExactPMF::uniform(4, 3, 2)), 0.0, 1e-14);
  const auto diag = ExactPMF::joint_matrix({{0.5, 0.0}, {0.0, 0.5}});
  EXPECT_NEAR(exact_mi(diag), std::log(2.0), 1e-14);
  EXPECT_THROW(exact_mi(ExactPMF::uniform(2, 2)), InvalidInput);
}

TEST(ExactMi, EqualsKlToProductOfMarginals) {
  Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    const auto joint = random_pmf(4, 3, 1 + static_cast<int>(rng.below(3)), rng);
    EXPECT_NEAR(exact_mi(joint), exact_kl(joint, product_of_marginals(joint)), 1e-12);
    EXPECT_NEAR(exact_mi(product_of_marginals(joint)), 0.0, 1e-12);
  }
}

TEST(ExactKl, ExamplesAndSupport) {
  const std::vector<std::vector<double>> bern(2, {0.9, 0.1});
  const auto p = ExactPMF::product(bern);
  EXPECT_NEAR(exact_kl(p, ExactPMF::uniform(2, 2)), oracle::kTwoBitKlToUniform, 1e-14);
  EXPECT_EQ(exact_kl(p, p), 0.0);
  const auto point = ExactPMF::point_mass({0, 0}, 2);
  EXPECT_THROW(exact_kl(p, point), AbsoluteContinuityViolation);
  EXPECT_NEAR(exact_kl(point, p), -2 * std::log(0.9), 1e-14);
}

TEST(Agreement, TableMatchesOnDemandSum) {
  Rng rng(9);
  const auto p = random_pmf(4, 3, 2, rng);
  const AgreementTable table(p);
  EXPECT_EQ(table.size(), 256u);
  std::vector<Token> x(4);
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    std::uint64_t r = idx;
    for (int i = 3; i >= 0; --i) {
      x[i] = static_cast<Token>(r % 4);
      r /= 4;
    }
    EXPECT_NEAR(table.at(idx), agreement_probability(p, x), 1e-15);
    EXPECT_EQ(table.index_of(x), idx);
  }
  const std::vector<Token> all_masked(4, 3);
  EXPECT_NEAR(table.at(all_masked), 1.0, 1e-14);
}

TEST(TimeMarginal, NormalizedAndLimits) {
  Rng rng(10);
  const auto p = random_pmf(3, 2, 1, rng);
  const auto sched = NoiseSchedule::geometric();
  for (double t : {0.0, 0.2, 0.7, 1.0}) {
    const auto pt = exact_time_marginal(p, sched, t);
    ASSERT_EQ(pt.size(), 27u);
    EXPECT_NEAR(std::accumulate(pt.begin(), pt.end(), 0.0), 1.0, 1e-13);
  }
  const auto p0 = exact_time_marginal(p, sched, 0.0);
  const AgreementTable table(p);
  for (std::uint64_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(p0[table.index_of(p.tokens_of(i))], p[i], 1e-15);
  }
  const auto p1 = exact_time_marginal(p, sched, 1.0);
  EXPECT_GT(p1.back(), 0.99999);
}

TEST(ScoreRatio, MatchesTimeMarginalQuotient) {
  Rng rng(11);
  const auto p = random_pmf(3, 3, 1, rng);
  const auto sched = NoiseSchedule::geometric();
  const double t = 0.6;
  const auto pt = exact_time_marginal(p, sched, t);
  const AgreementTable table(p);
  const TokenSeq xt({3, 1, 3}, 3);
  const double base = pt[table.index_of(xt.tokens())];
  for (int pos : {0, 2}) {
    for (Token n = 0; n < 3; ++n) {
      TokenSeq y = xt;
      y.set(pos, n);
      const double want = pt[table.index_of(y.tokens())] / base;
      EXPECT_NEAR(exact_score_ratio(p, sched, t, xt, pos, n) / want, 1.0, 1e-12);
    }
  }
  EXPECT_THROW(exact_score_ratio(p, sched, t, xt, 1, 0), InvalidInput);
  EXPECT_THROW(exact_score_ratio(p, sched, t, xt, 0, 3), InvalidInput);
}

TEST(ScoreRatio, UniformReducesToClosedForm) {
  const auto sched = NoiseSchedule::geometric();
  const auto p = ExactPMF::uniform(3, 4);
  const TokenSeq xt({4, 2, 4}, 4);
  for (double t : {0.1, 0.5, 0.95}) {
    EXPECT_NEAR(exact_score_ratio(p, sched, t, xt, 0, 1) / uniform_score_ratio(sched, t, 4),
                1.0, 1e-12);
  }
}

TEST(ScoreRatio, ZeroOffSupport) {
  const auto sched = NoiseSchedule::geometric();
  const auto p = ExactPMF::point_mass({0, 1}, 2);
  const TokenSeq xt({2, 1}, 2);
  EXPECT_EQ(exact_score_ratio(p, sched, 0.5, xt, 0, 1), 0.0);
  EXPECT_GT(exact_score_ratio(p, sched, 0.5, xt, 0, 0), 0.0);
  // x_t itself unreachable.
  const TokenSeq dead({2, 0}, 2);
  EXPECT_EQ(exact_score_ratio(p, sched, 0.5, dead, 0, 0), 0.0);
}

TEST(ExactScoreSource, BatchMatchesPointwise) {
  Rng rng(12);
  const auto p = random_pmf(3, 2, 1, rng);
  const auto sched = NoiseSchedule::geometric();
  const ExactScoreSource src(p, sched);
  const std::vector<Token> states{2, 0, 2, 1, 2, 2, 0, 1, 0};
  const std::vector<double> times{0.3, 0.8, 0.5};
  std::vector<double> out(3 * 3 * 2, -1.0);
  src.score_ratios(states, times, out);
  for (int r = 0; r < 3; ++r) {
    const TokenSeq xt({states[3 * r], states[3 * r + 1], states[3 * r + 2]}, 2);
    for (int i = 0; i < 3; ++i) {
      if (!xt.is_masked(i)) continue;
      for (Token n = 0; n < 2; ++n) {
        EXPECT_NEAR(out[(r * 3 + i) * 2 + n],
                    exact_score_ratio(p, sched, times[r], xt, i, n), 1e-13);
      }
    }
  }
  std::vector<double> wrong(5);
  EXPECT_THROW(src.score_ratios(states, times, wrong), InvalidInput);
}

TEST(PmfSampler, FrequenciesMatch) {
  const auto p = skew_joint();
  const PmfSampler sampler(p);
  Rng rng(13);
  std::vector<int> counts(p.size(), 0);
  const int draws = 200000;
  for (int k = 0; k < draws; ++k) ++counts[sampler.sample_index(rng)];
  for (std::uint64_t i = 0; i < p.size(); ++i) {
    const double sd = std::sqrt(p[i] * (1 - p[i]) / draws);
    EXPECT_NEAR(counts[i] / static_cast<double>(draws), p[i], 4 * sd);
  }
}

TEST(CtmcKl, RecoversDirectKl) {
  const auto sched = NoiseSchedule::geometric();
  const std::vector<std::vector<double>> bern(2, {0.9, 0.1});
  const auto p = ExactPMF::product(bern);
  EXPECT_NEAR(exact_kl_ctmc(p, ExactPMF::uniform(2, 2), sched), oracle::kTwoBitKlToUniform,
              1e-4);
  Rng rng(14);
  for (int k = 0; k < 4; ++k) {
    const auto a = random_pmf(3, 3, 1, rng);
    const auto b = random_pmf(3, 3, 1, rng);
    EXPECT_NEAR(exact_kl_ctmc(a, b, sched), exact_kl(a, b), 1e-4 * (1 + exact_kl(a, b)));
  }
}

TEST(CtmcKl, MonteCarloPathAgrees) {
  const auto sched = NoiseSchedule::geometric();
  Rng rng(15);
  const auto a = random_pmf(3, 2, 1, rng);
  const auto b = random_pmf(3, 2, 1, rng);
  ExactKlOptions opts;
  opts.exhaustive_limit = 1;
  opts.time_nodes = 64;
  opts.mc_samples_per_node = 20000;
  opts.seed = 3;
  EXPECT_NEAR(exact_kl_ctmc(a, b, sched, opts), exact_kl(a, b),
              0.05 * exact_kl(a, b) + 2e-3);
}

TEST(CtmcKl, IntegrandNonNegativeAndSupportChecked) {
  const auto sched = NoiseSchedule::geometric();
  Rng rng(16);
  const auto a = random_pmf(2, 3, 1, rng);
  const auto b = random_pmf(2, 3, 1, rng);
  for (double t : {0.01, 0.3, 0.99}) EXPECT_GE(exact_kl_integrand(a, b, sched, t), 0.0);
  EXPECT_NEAR(exact_kl_integrand(a, a, sched, 0.5), 0.0, 1e-14);
  EXPECT_THROW(exact_kl_ctmc(a, ExactPMF::point_mass({0, 0}, 3), sched),
               AbsoluteContinuityViolation);
}

}  // namespace
}  // namespace infosedd
