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
#include <limits>
#include <numeric>
#include <set>

#include "infosedd/error.hpp"
#include "infosedd/exact.hpp"
#include "infosedd/synth.hpp"
#include "unit/test_util.hpp"

namespace infosedd {
namespace {

TEST(RandomPmf, PositiveAndNormalized) {
  Rng rng(1);
  const auto p = random_pmf(3, 4, 1, rng);
  EXPECT_EQ(p.size(), 64u);
  EXPECT_EQ(p.block_split(), std::optional<int>(1));
  double total = 0.0;
  for (double v : p.probs()) {
    EXPECT_GT(v, 0.0);
    total += v;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Genome, MapsToNormalizedJoint) {
  const Genome g{{3.0, 1.0, 1.0, 3.0}, 1e-6};
  const auto p = genome_to_pmf(g, 2);
  EXPECT_EQ(p.length(), 2);
  EXPECT_EQ(p.block_split(), std::optional<int>(1));
  EXPECT_NEAR(p[0], (2 + 1e-6) / (4 + 4e-6), 1e-15);
  EXPECT_NEAR(p[1], 1e-6 / (4 + 4e-6), 1e-18);
  EXPECT_THROW(genome_to_pmf(g, 3), InvalidInput);
  const Genome flat{{5.0, 5.0, 5.0, 5.0}, 1e-6};
  EXPECT_NEAR(exact_mi(genome_to_pmf(flat, 2)), 0.0, 1e-15);
}

TEST(EvolveJoint, ReachesTargets) {
  for (double target : {0.0, 0.1, 0.4}) {
    ESConfig cfg;
    cfg.target_mi = target;
    cfg.tolerance = 1e-4;
    cfg.seed = 3;
    const auto r = evolve_joint(cfg, 2);
    EXPECT_TRUE(r.converged) << "target " << target;
    EXPECT_NEAR(r.achieved_mi, target, 1e-4);
    EXPECT_NEAR(exact_mi(r.joint), r.achieved_mi, 1e-14);
  }
}

TEST(EvolveJoint, Deterministic) {
  ESConfig cfg;
  cfg.target_mi = 0.3;
  cfg.seed = 9;
  const auto a = evolve_joint(cfg, 3);
  const auto b = evolve_joint(cfg, 3);
  EXPECT_EQ(a.generations, b.generations);
  for (std::uint64_t i = 0; i < a.joint.size(); ++i) EXPECT_EQ(a.joint[i], b.joint[i]);
}

TEST(EvolveJoint, ReportsUnreachableTarget) {
  // A 2 x 2 joint carries at most ln 2 nats.
  ESConfig cfg;
  cfg.target_mi = 1.0;
  cfg.max_generations = 200;
  const auto r = evolve_joint(cfg, 2);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.achieved_mi, std::log(2.0) + 1e-12);
}

TEST(Cantor, PairingExamples) {
  EXPECT_EQ(cantor_pair(0, 0), 0u);
  EXPECT_EQ(cantor_pair(1, 0), 1u);
  EXPECT_EQ(cantor_pair(0, 1), 2u);
  EXPECT_EQ(cantor_pair(2, 0), 3u);
  EXPECT_EQ(cantor_pair(3, 4), 32u);
  const auto u = cantor_unpair(32);
  EXPECT_EQ(u.x, 3u);
  EXPECT_EQ(u.y, 4u);
}

TEST(Cantor, Bijective) {
  for (std::uint64_t x = 0; x < 60; ++x) {
    for (std::uint64_t y = 0; y < 60; ++y) {
      const auto b = cantor_unpair(cantor_pair(x, y));
      ASSERT_EQ(b.x, x);
      ASSERT_EQ(b.y, y);
    }
  }
  for (std::uint64_t z = 0; z < 5000; ++z) {
    const auto p = cantor_unpair(z);
    ASSERT_EQ(cantor_pair(p.x, p.y), z);
  }
  const std::uint64_t big = std::uint64_t{1} << 31;
  EXPECT_EQ(cantor_unpair(cantor_pair(big, big + 7)).y, big + 7);
}

TEST(Cantor, OverflowIsRangeError) {
  const auto max = std::numeric_limits<std::uint64_t>::max();
  EXPECT_THROW(cantor_pair(max, 0), RangeError);
  EXPECT_THROW(cantor_pair(std::uint64_t{1} << 33, std::uint64_t{1} << 33), RangeError);
}

TEST(ExpandSupport, PreservesMiAndGrowsSupport) {
  const auto base = ExactPMF::joint_matrix({{0.4, 0.1}, {0.1, 0.4}});
  for (int n_noise : {1, 3, 7}) {
    const auto e = expand_support(base, n_noise, 0.5);
    EXPECT_EQ(e.length(), 2);
    EXPECT_EQ(e.vocab(), 2 * (n_noise + 1));
    EXPECT_NEAR(exact_mi(e), exact_mi(base), 1e-12);
    const auto mx = marginal_x(e);
    for (double v : mx.probs()) EXPECT_GT(v, 0.0);
  }
  EXPECT_THROW(expand_support(ExactPMF::uniform(3, 2, 1), 1, 0.5), InvalidInput);
}

TEST(ConcatGenerator, LayoutAndGroundTruth) {
  const auto a = ExactPMF::joint_matrix({{0.5, 0.0}, {0.0, 0.5}});
  const auto b = ExactPMF::joint_matrix({{0.25, 0.25}, {0.25, 0.25}});
  const ConcatGenerator gen({a, b});
  EXPECT_EQ(gen.length(), 4);
  EXPECT_EQ(gen.block_split(), 2);
  EXPECT_NEAR(gen.ground_truth_mi(), std::log(2.0), 1e-14);
  EXPECT_NEAR(gen.ground_truth_entropy(), 3 * std::log(2.0), 1e-14);
  ASSERT_TRUE(gen.has_explicit_joint());
  const auto j = gen.explicit_joint();
  EXPECT_NEAR(exact_mi(j), gen.ground_truth_mi(), 1e-12);
  // Layout: X = (a.x, b.x), Y = (a.y, b.y), so tokens 0 and 2 agree.
  Rng rng(4);
  std::vector<Token> row(4);
  for (int k = 0; k < 200; ++k) {
    gen.sample(rng, row);
    EXPECT_EQ(row[0], row[2]);
  }
}

TEST(ConcatGenerator, LargeProductsAreImplicit) {
  const ConcatGenerator gen(std::vector<ExactPMF>(11, ExactPMF::uniform(2, 2, 1)));
  EXPECT_EQ(gen.length(), 22);
  EXPECT_FALSE(gen.has_explicit_joint());
  EXPECT_THROW(gen.explicit_joint(), ScaleBoundExceeded);
  EXPECT_THROW(ConcatGenerator({}), InvalidInput);
}

TEST(SampleDataset, ReproducibleAndRecordsTruth) {
  const auto gen = length_sweep_preset(0.5, 4, 1);
  const auto a = sample_dataset(gen, 5000, 17);
  const auto b = sample_dataset(gen, 5000, 17);
  const auto c = sample_dataset(gen, 5000, 18);
  EXPECT_EQ(a.rows(), 5000u);
  EXPECT_TRUE(std::equal(a.tokens().begin(), a.tokens().end(), b.tokens().begin()));
  EXPECT_FALSE(std::equal(a.tokens().begin(), a.tokens().end(), c.tokens().begin()));
  ASSERT_TRUE(a.ground_truth_mi().has_value());
  EXPECT_NEAR(*a.ground_truth_mi(), 0.5, 1e-3);
  EXPECT_EQ(a.block_split(), std::optional<int>(2));
  // Prefix property of chunked streams.
  const auto shorter = sample_dataset(gen, 4096, 17);
  EXPECT_TRUE(std::equal(shorter.tokens().begin(), shorter.tokens().end(), a.tokens().begin()));
}

TEST(SampleDataset, EmpiricalFrequencies) {
  const auto p = ExactPMF::joint_matrix({{0.5, 0.25}, {0.1, 0.15}});
  const auto d = sample_dataset(p, 100000, 3);
  std::vector<double> counts(4, 0.0);
  for (std::size_t r = 0; r < d.rows(); ++r) counts[p.index_of(d.row(r))] += 1.0;
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(counts[i] / 1e5, p[i], 0.006);
}

TEST(Dataset, SaveLoadRoundTrip) {
  testing_util::TempDir dir;
  auto d = sample_dataset(mi_sweep_preset(1.0, 3, 2), 1000, 4);
  d.save(dir.file("d.bin"));
  const auto back = Dataset::load(dir.file("d.bin"));
  EXPECT_EQ(back.length(), 6);
  EXPECT_EQ(back.block_split(), std::optional<int>(3));
  EXPECT_TRUE(std::equal(d.tokens().begin(), d.tokens().end(), back.tokens().begin()));
  EXPECT_EQ(back.ground_truth_mi(), d.ground_truth_mi());
  EXPECT_THROW(Dataset::load(dir.file("none.bin")), FormatError);
}

TEST(Presets, SupportSweep) {
  for (int support : {2, 4, 16}) {
    const auto g = support_sweep_preset(0.5, support, 5);
    EXPECT_EQ(g.vocab(), support);
    EXPECT_EQ(g.length(), 2);
    EXPECT_NEAR(g.ground_truth_mi(), 0.5, 1e-3);
  }
  EXPECT_THROW(support_sweep_preset(0.5, 3, 5), InvalidInput);
}

TEST(Presets, LengthSweep) {
  for (int length : {2, 8, 32}) {
    const auto g = length_sweep_preset(0.5, length, 6);
    EXPECT_EQ(g.length(), length);
    EXPECT_EQ(g.vocab(), 2);
    EXPECT_EQ(g.block_split(), length / 2);
    EXPECT_NEAR(g.ground_truth_mi(), 0.5, 1e-3);
  }
}

TEST(Presets, MiSweep) {
  for (double mi : {0.0, 1.0, 2.0}) {
    const auto g = mi_sweep_preset(mi, 10, 7);
    EXPECT_EQ(g.length(), 20);
    EXPECT_NEAR(g.ground_truth_mi(), mi, 1e-3);
  }
  EXPECT_THROW(mi_sweep_preset(10.0, 2, 7), NumericFault);
}

}  // namespace
}  // namespace infosedd
