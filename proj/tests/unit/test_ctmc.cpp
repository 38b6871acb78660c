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
#include <numbers>

#include "infosedd/ctmc.hpp"
#include "infosedd/error.hpp"
#include "infosedd/rng.hpp"
#include "infosedd/schedule.hpp"
#include "infosedd/tokens.hpp"
#include "oracles/frozen_oracles.hpp"

namespace infosedd {
namespace {

TEST(SigmaBar, ConstantScheduleIsLinear) {
  const auto s = NoiseSchedule::constant(2.0);
  EXPECT_DOUBLE_EQ(sigma_bar(s, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(s.sigma(0.3), 2.0);
}

TEST(SigmaBar, ZeroResidualAtOrigin) {
  for (const auto& s : {NoiseSchedule::geometric(), NoiseSchedule::constant(3.0)}) {
    EXPECT_EQ(sigma_bar(s, 0.0), 0.0);
    EXPECT_LE(sigma_bar(s, 0.0), s.sigma_min());
  }
}

TEST(SigmaBar, GeometricMatchesIndependentQuadrature) {
  const auto s = NoiseSchedule::geometric(1e-3, 20.0, 1.0);
  EXPECT_NEAR(sigma_bar(s, 1.0), oracle::kSigmaBarGeometricAt1, 1e-9);
  EXPECT_NEAR(sigma_bar(s, 0.5), oracle::kSigmaBarGeometricAtHalf, 1e-12);
}

TEST(SigmaBar, DerivativeIsSigma) {
  const auto s = NoiseSchedule::geometric(1e-3, 20.0, 2.0);
  for (double t = 0.1; t < 1.95; t += 0.17) {
    const double h = 1e-6;
    const double fd = (s.sigma_bar(t + h) - s.sigma_bar(t - h)) / (2 * h);
    EXPECT_NEAR(fd / s.sigma(t), 1.0, 1e-7) << "t = " << t;
  }
}

TEST(SigmaBar, StrictlyIncreasingAndPositiveRate) {
  const auto s = NoiseSchedule::geometric();
  double prev = -1.0;
  for (int k = 0; k <= 200; ++k) {
    const double t = k / 200.0;
    EXPECT_GT(s.sigma_bar(t), prev);
    EXPECT_GT(s.sigma(t), 0.0);
    prev = s.sigma_bar(t);
  }
}

TEST(SigmaBar, OutsideHorizonIsDomainError) {
  const auto s = NoiseSchedule::geometric();
  EXPECT_THROW(sigma_bar(s, -1e-9), DomainError);
  EXPECT_THROW(sigma_bar(s, 1.0 + 1e-9), DomainError);
  EXPECT_THROW(s.sigma(2.0), DomainError);
}

TEST(Schedule, DefaultIsNearAbsorbing) {
  const auto s = NoiseSchedule::geometric();
  EXPECT_GE(s.terminal_absorption(), 0.999);
  EXPECT_TRUE(s.is_near_absorbing());
  EXPECT_FALSE(NoiseSchedule::constant(1.0).is_near_absorbing());
}

TEST(Schedule, JsonRoundTrip) {
  const auto s = NoiseSchedule::geometric(2e-3, 15.0, 1.5);
  const auto j = s.to_json();
  EXPECT_EQ(j.at("kind"), "geometric");
  for (const char* key : {"sigma_min", "sigma_max", "T"}) EXPECT_TRUE(j.contains(key));
  EXPECT_EQ(NoiseSchedule::from_json(j), s);
  const auto c = NoiseSchedule::constant(4.0, 2.0);
  EXPECT_EQ(NoiseSchedule::from_json(c.to_json()), c);
}

TEST(Schedule, RejectsInvalidParameters) {
  EXPECT_THROW(NoiseSchedule::geometric(-1.0, 20.0), DomainError);
  EXPECT_THROW(NoiseSchedule::geometric(1.0, 0.5), DomainError);
  EXPECT_THROW(NoiseSchedule::constant(0.0), DomainError);
  EXPECT_THROW(NoiseSchedule::geometric(1e-3, 20.0, 0.0), DomainError);
}

TEST(TokenKernel, Examples) {
  const auto s = NoiseSchedule::geometric();
  const auto k0 = token_kernel(s, 0.0);
  EXPECT_EQ(k0.keep_prob, 1.0);
  EXPECT_EQ(k0.absorb_prob, 0.0);

  const auto half = token_kernel(NoiseSchedule::constant(std::numbers::ln2), 1.0);
  EXPECT_NEAR(half.keep_prob, 0.5, 1e-15);
  EXPECT_NEAR(half.absorb_prob, 0.5, 1e-15);

  const auto big = token_kernel(NoiseSchedule::constant(800.0), 1.0);
  EXPECT_LT(big.keep_prob, 1e-300);
  EXPECT_EQ(big.absorb_prob, 1.0);
}

TEST(TokenKernel, NormalizedAndMonotoneOnGrid) {
  const auto s = NoiseSchedule::geometric();
  double prev = -1.0;
  for (int k = 0; k < 100; ++k) {
    const double t = k / 99.0;
    const auto kern = token_kernel(s, t);
    EXPECT_LE(std::abs(kern.keep_prob + kern.absorb_prob - 1.0),
              std::numeric_limits<double>::epsilon());
    EXPECT_GT(kern.absorb_prob, prev);
    prev = kern.absorb_prob;
  }
}

TEST(Perturb, NearIdentityAtTimeZero) {
  const auto s = NoiseSchedule::geometric();
  Rng rng(1);
  const TokenSeq x0({0, 1, 2, 1, 0}, 3);
  for (int k = 0; k < 1000; ++k) EXPECT_EQ(perturb(x0, s, 0.0, rng), x0);
}

TEST(Perturb, MaskedFractionAtHorizon) {
  const auto s = NoiseSchedule::geometric();
  Rng rng(2);
  const int draws = 100000;
  const TokenSeq x0({1}, 2);
  int masked = 0;
  for (int k = 0; k < draws; ++k) masked += perturb(x0, s, 1.0, rng).masked_count();
  const double p = s.terminal_absorption();
  const double sd = std::sqrt(p * (1 - p) / draws);
  EXPECT_NEAR(static_cast<double>(masked) / draws, p, 3 * sd + 1e-12);
}

TEST(Perturb, HalfMaskedAtLn2) {
  const auto s = NoiseSchedule::constant(std::numbers::ln2);
  Rng rng(3);
  const TokenSeq x0({0}, 2);
  int masked = 0;
  for (int k = 0; k < 100000; ++k) masked += perturb(x0, s, 1.0, rng).masked_count();
  EXPECT_NEAR(masked / 100000.0, 0.5, 0.005);
}

TEST(Perturb, NeverAltersUnmaskedValues) {
  const auto s = NoiseSchedule::geometric();
  Rng rng(4);
  const TokenSeq x0({3, 0, 1, 2, 2, 1, 0, 3}, 4);
  for (int k = 0; k < 500; ++k) {
    const auto xt = perturb(x0, s, rng.uniform(), rng);
    for (int i = 0; i < x0.length(); ++i) {
      EXPECT_TRUE(xt[i] == x0[i] || xt.is_masked(i));
    }
  }
}

TEST(Perturb, RejectsMaskedInput) {
  const auto s = NoiseSchedule::geometric();
  Rng rng(5);
  const TokenSeq x({0, 2}, 2);  // 2 is MASK
  EXPECT_THROW(perturb(x, s, 0.5, rng), InvalidInput);
}

TEST(Perturb, PartialVariantNeverUnmasks) {
  const auto s = NoiseSchedule::geometric();
  Rng rng(6);
  const TokenSeq x({0, 2, 1, 2, 0}, 2);
  for (int k = 0; k < 500; ++k) {
    const auto y = perturb_partial(x, s, rng.uniform(), rng);
    EXPECT_TRUE(y.is_masked(1));
    EXPECT_TRUE(y.is_masked(3));
    EXPECT_GE(y.masked_count(), 2);
  }
}

TEST(Perturb, SameSeedSameDraws) {
  const auto s = NoiseSchedule::geometric();
  const TokenSeq x0({0, 1, 0, 1, 0, 1}, 2);
  Rng a(9), b(9);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(perturb(x0, s, 0.5, a), perturb(x0, s, 0.5, b));
}

TEST(UniformScoreRatio, Examples) {
  const auto s = NoiseSchedule::constant(std::numbers::ln2);
  EXPECT_NEAR(uniform_score_ratio(s, 1.0, 2), 0.5, 1e-15);
  EXPECT_NEAR(uniform_score_ratio(s, 1.0, 4), 0.25, 1e-15);
  const auto g = NoiseSchedule::geometric();
  const double base = 2 * uniform_score_ratio(g, 0.3, 2);
  for (int n : {4, 8, 16}) EXPECT_NEAR(n * uniform_score_ratio(g, 0.3, n), base, 1e-14);
  EXPECT_THROW(uniform_score_ratio(g, 0.0, 2), DomainError);
}

TEST(UnmaskKernelRatio, MatchesKernel) {
  const auto g = NoiseSchedule::geometric();
  for (double t : {0.01, 0.3, 0.9}) {
    const auto k = token_kernel(g, t);
    EXPECT_NEAR(unmask_kernel_ratio(g.sigma_bar(t)) / (k.keep_prob / k.absorb_prob), 1.0,
                1e-13);
  }
  EXPECT_THROW(unmask_kernel_ratio(0.0), DomainError);
}

TEST(KTerm, Examples) {
  EXPECT_EQ(k_term(1.0), -1.0);
  EXPECT_NEAR(k_term(std::exp(1.0)), 0.0, 1e-15);
  EXPECT_NEAR(k_term(2.0), oracle::kKTermAt2, 1e-15);
  EXPECT_THROW(k_term(0.0), DomainError);
  EXPECT_THROW(k_term(-1.0), DomainError);
  EXPECT_EQ(k_term_or_zero(0.0), 0.0);
  EXPECT_THROW(k_term_or_zero(-0.5), DomainError);
}

TEST(KTerm, MinimizedAtOne) {
  for (double a : {0.1, 0.5, 0.99, 1.01, 2.0, 10.0}) EXPECT_GT(k_term(a), k_term(1.0));
}

TEST(KTerm, Convex) {
  Rng rng(11);
  for (int k = 0; k < 1000; ++k) {
    const double a = std::exp(rng.uniform(-8, 8));
    const double b = std::exp(rng.uniform(-8, 8));
    EXPECT_LE(k_term(0.5 * (a + b)), 0.5 * (k_term(a) + k_term(b)) + 1e-12 * (a + b));
  }
}

TEST(TokenSeq, Invariants) {
  EXPECT_THROW(TokenSeq({0, 3}, 2), InvalidInput);
  EXPECT_THROW(TokenSeq({}, 2), InvalidInput);
  EXPECT_THROW(TokenSeq({0}, 0), InvalidInput);
  const auto m = TokenSeq::all_masked(4, 5);
  EXPECT_EQ(m.masked_count(), 4);
  EXPECT_EQ(m.mask(), 5);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Rng a = Rng::stream(42, 0), b = Rng::stream(42, 0), c = Rng::stream(42, 1);
  int same = 0;
  for (int k = 0; k < 100; ++k) {
    const auto va = a.bits();
    EXPECT_EQ(va, b.bits());
    same += va == c.bits();
  }
  EXPECT_LT(same, 2);
}

TEST(Rng, BelowStaysInRangeAndIsRoughlyUniform) {
  Rng rng(3);
  std::vector<int> counts(7, 0);
  for (int k = 0; k < 70000; ++k) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

}  // namespace
}  // namespace infosedd
