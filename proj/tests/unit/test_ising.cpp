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

#include "infosedd/error.hpp"
#include "infosedd/ising.hpp"
#include "oracles/frozen_oracles.hpp"
#include "unit/test_util.hpp"

namespace infosedd {
namespace {

TEST(Ising, EnergyOfReferenceStates) {
  const IsingSystem sys{4, 1.0, 1.0, 2.0};
  EXPECT_EQ(energy(sys, SpinConfig::all_up(4)), -32.0);
  EXPECT_EQ(energy(sys, SpinConfig::checkerboard(4)), 32.0);
  const IsingSystem strong{3, 2.5, 1.0, 2.0};
  EXPECT_EQ(energy(strong, SpinConfig::all_up(3)), -2.5 * 18);
}

TEST(Ising, DeltaEnergyMatchesRecompute) {
  const IsingSystem sys{5, 1.3, 1.0, 2.0};
  Rng rng(1);
  auto cfg = SpinConfig::random(5, rng);
  for (int site = 0; site < cfg.sites(); ++site) {
    const double before = energy(sys, cfg);
    const double d = delta_energy(sys, cfg, site);
    cfg.flip(site);
    EXPECT_NEAR(energy(sys, cfg) - before, d, 1e-12);
  }
  EXPECT_THROW(delta_energy(sys, cfg, 25), InvalidInput);
}

TEST(Ising, SpinConfigBasics) {
  const auto up = SpinConfig::all_up(3);
  EXPECT_EQ(up.magnetization(), 1.0);
  const auto tok = up.tokens();
  EXPECT_EQ(tok.size(), 9u);
  for (Token t : tok) EXPECT_EQ(t, 1);
  EXPECT_EQ(SpinConfig::checkerboard(4).magnetization(), 0.0);
  EXPECT_THROW(SpinConfig(2, {1, 1, 1}), InvalidInput);
  EXPECT_THROW(SpinConfig(2, {1, 0, 1, 1}), InvalidInput);
}

TEST(Ising, SystemValidation) {
  EXPECT_THROW((IsingSystem{1, 1.0, 1.0, 2.0}.validate()), InvalidInput);
  EXPECT_THROW((IsingSystem{4, 1.0, 1.0, 0.0}.validate()), InvalidInput);
  EXPECT_NO_THROW((IsingSystem{4, 1.0, 1.0, 2.0}.validate()));
}

TEST(ExactBoltzmann, MatchesOracleAt2x2) {
  const auto p = exact_boltzmann(IsingSystem{2, 1.0, 1.0, 2.5});
  ASSERT_EQ(p.size(), 16u);
  for (int k = 0; k < 16; ++k) EXPECT_NEAR(p[k], oracle::kBoltzmann2x2At2p5[k], 1e-14) << k;
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-14);
  EXPECT_THROW(exact_boltzmann(IsingSystem{5, 1.0, 1.0, 2.0}), ScaleBoundExceeded);
}

TEST(ExactBoltzmann, HighTemperatureIsUniform) {
  const auto p = exact_boltzmann(IsingSystem{3, 1.0, 1.0, 1e6});
  for (double v : p) EXPECT_NEAR(v * 512, 1.0, 1e-4);
}

TEST(Metropolis, MatchesExactDistributionOn3x3) {
  // 3 x 3 has no doubled bonds, an independent check of the 2 x 2 self-test.
  const IsingSystem sys{3, 1.0, 1.0, 3.0};
  const auto exact = exact_boltzmann(sys);
  MetropolisConfig cfg;
  cfg.burn_in_sweeps = 200;
  cfg.n_samples = 300000;
  cfg.sweeps_between = 1;
  const auto data = metropolis_sample(sys, cfg, 5);
  ASSERT_EQ(data.length(), 9);
  ASSERT_EQ(data.vocab(), 2);
  std::vector<double> counts(exact.size(), 0.0);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    std::size_t idx = 0;
    for (Token t : data.row(r)) idx = 2 * idx + t;
    counts[idx] += 1.0;
  }
  double tv = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k) {
    tv += std::abs(counts[k] / data.rows() - exact[k]);
  }
  EXPECT_LT(0.5 * tv, 0.03);
}

TEST(Metropolis, ReproducibleAndChainAcceptsMoves) {
  const IsingSystem sys{6, 1.0, 1.0, 2.5};
  MetropolisConfig cfg;
  cfg.burn_in_sweeps = 10;
  cfg.n_samples = 50;
  cfg.sweeps_between = 2;
  const auto a = metropolis_sample(sys, cfg, 7);
  const auto b = metropolis_sample(sys, cfg, 7);
  EXPECT_TRUE(std::equal(a.tokens().begin(), a.tokens().end(), b.tokens().begin()));
  MetropolisChain chain(sys, SpinConfig::all_up(6), Rng(1));
  chain.sweep();
  EXPECT_GT(chain.accepted(), 0u);
  cfg.n_samples = 0;
  EXPECT_THROW(metropolis_sample(sys, cfg, 7), InvalidInput);
}

TEST(Metropolis, LowTemperatureStaysOrdered) {
  const IsingSystem sys{8, 1.0, 1.0, 1.0};
  MetropolisConfig cfg;
  cfg.burn_in_sweeps = 100;
  cfg.n_samples = 100;
  cfg.start_all_up = true;
  const auto data = metropolis_sample(sys, cfg, 3);
  double mean_up = 0.0;
  for (Token t : data.tokens()) mean_up += t;
  EXPECT_GT(mean_up / data.tokens().size(), 0.95);
}

TEST(Onsager, LogLambdaMatchesOracle) {
  EXPECT_NEAR(onsager_log_lambda(2.0), oracle::kOnsagerLogLambdaAt2, 1e-10);
  EXPECT_THROW(onsager_log_lambda(0.0), DomainError);
  EXPECT_THROW(onsager_log_lambda(2.0, 1.0, 1.0, 0), InvalidInput);
}

TEST(Onsager, EntropyTableMatchesOracle) {
  constexpr int n = sizeof(oracle::kOnsagerTemperatures) / sizeof(double);
  for (int k = 0; k < n; ++k) {
    const double t = oracle::kOnsagerTemperatures[k];
    EXPECT_NEAR(onsager_entropy_per_site(t), oracle::kOnsagerEntropy[k], 1e-5) << "T = " << t;
  }
}

TEST(Onsager, EntropyLimits) {
  EXPECT_LT(onsager_entropy_per_site(0.5), 1e-4);
  EXPECT_NEAR(onsager_entropy_per_site(1000.0), std::log(2.0), 1e-5);
  double prev = -1.0;
  for (double t = 0.5; t <= 6.0; t += 0.25) {
    const double h = onsager_entropy_per_site(t);
    EXPECT_GT(h, prev) << "T = " << t;
    prev = h;
  }
  EXPECT_THROW(onsager_entropy_per_site(1.0, 2.0), DomainError);
}

TEST(Onsager, FreeEnergySign) {
  for (double t : {1.0, 2.0, 3.0}) {
    EXPECT_NEAR(onsager_free_energy(t), -t * onsager_log_lambda(t), 1e-14);
    EXPECT_LT(onsager_free_energy(t), 0.0);
  }
}

TEST(IsingExperiment, SmallRunWritesCsv) {
  IsingExperimentConfig cfg;
  cfg.L = 3;
  cfg.temperatures = {4.0, 2.0};
  cfg.sampler.burn_in_sweeps = 50;
  cfg.sampler.n_samples = 2000;
  cfg.sampler.sweeps_between = 2;
  cfg.arch.width = 16;
  cfg.arch.depth = 1;
  cfg.train.steps = 50;
  cfg.train.batch_size = 64;
  cfg.train.learning_rate = 1e-3;
  cfg.estimator.n_samples = 2000;
  const auto rows = run_ising_experiment(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].T, 2.0);
  EXPECT_EQ(rows[1].T, 4.0);
  for (const auto& r : rows) {
    EXPECT_TRUE(std::isfinite(r.h_estimated));
    EXPECT_GT(r.h_stderr, 0.0);
    EXPECT_NEAR(r.h_analytic, onsager_entropy_per_site(r.T), 1e-14);
  }
  testing_util::TempDir dir;
  write_ising_csv(rows, dir.file("ising.csv"));
  const auto text = testing_util::read_file(dir.file("ising.csv"));
  EXPECT_EQ(text.rfind("T,H_est,H_stderr,H_analytic\n", 0), 0u);
  cfg.temperatures.clear();
  EXPECT_THROW(run_ising_experiment(cfg), InvalidInput);
}

}  // namespace
}  // namespace infosedd
