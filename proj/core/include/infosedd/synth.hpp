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
#include <span>
#include <string>
#include <vector>

#include "infosedd/dataset.hpp"
#include "infosedd/exact.hpp"
#include "infosedd/rng.hpp"

namespace infosedd {

/// Unnormalized joint encoding; one real per cell of an |X| x |Y| table.
struct Genome {
  std::vector<double> values;
  double epsilon = 1e-6;
};

/// Dirichlet(1) draw over all N^M cells; strictly positive.
ExactPMF random_pmf(int length, int vocab, std::optional<int> block_split,
                    Rng& rng);

/// (g - min(g) + eps) / sum(g - min(g) + eps), reshaped to an n x n joint
/// with block split 1. InvalidInput unless values.size() == n * n.
ExactPMF genome_to_pmf(const Genome& genome, int n);

struct ESConfig {
  int population = 64;  // lambda, children per generation
  int parents = 16;     // mu
  double mutation_sigma = 0.1;
  int max_generations = 5000;
  double target_mi = 0.5;
  double tolerance = 1e-3;
  std::uint64_t seed = 0;
};

struct ESResult {
  ExactPMF joint;
  double achieved_mi;
  bool converged;
  int generations;
};

/// (mu + lambda) evolution strategy over n x n genomes. Fitness is
/// |exact_mi - target|; the step size follows the 1/5 success rule.
ESResult evolve_joint(const ESConfig& config, int n);

/// (x + y)(x + y + 1) / 2 + y. RangeError when the result overflows.
std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y);
struct CantorPair {
  std::uint64_t x;
  std::uint64_t y;
};
CantorPair cantor_unpair(std::uint64_t z);

/// Pairs each side of a two-token joint with independent Binomial(n_noise,
/// p) noise, X' = pair(X, Z_x) and Y' = pair(Y, Z_y), and re-indexes the
/// paired values densely in increasing order. The support grows to
/// N (n_noise + 1) per side; I(X'; Y') = I(X; Y).
ExactPMF expand_support(const ExactPMF& joint, int n_noise, double p);

/// Independent joints laid side by side: X = the parts' X blocks in order,
/// then Y = the parts' Y blocks in the same order.
class ConcatGenerator {
 public:
  explicit ConcatGenerator(std::vector<ExactPMF> parts);

  int length() const { return length_; }
  int vocab() const { return vocab_; }
  int block_split() const { return split_; }
  const std::vector<ExactPMF>& parts() const { return parts_; }
  /// Sum of the parts' exact MIs.
  double ground_truth_mi() const { return mi_; }
  /// Sum of the parts' exact entropies.
  double ground_truth_entropy() const { return entropy_; }

  void sample(Rng& rng, std::span<Token> out) const;

  bool has_explicit_joint() const;
  /// Full product joint; ScaleBoundExceeded above the oracle bound.
  ExactPMF explicit_joint() const;

 private:
  std::vector<ExactPMF> parts_;
  std::vector<PmfSampler> samplers_;
  std::vector<int> x_offset_;
  std::vector<int> y_offset_;
  int length_ = 0;
  int vocab_ = 0;
  int split_ = 0;
  double mi_ = 0.0;
  double entropy_ = 0.0;
};

/// n_rows i.i.d. draws; rows come in chunks of 4096 with one RNG stream per
/// chunk. Header records seed and ground truth.
Dataset sample_dataset(const ConcatGenerator& gen, std::size_t n_rows,
                       std::uint64_t seed);
Dataset sample_dataset(const ExactPMF& pmf, std::size_t n_rows,
                       std::uint64_t seed);

/// Base 2 x 2 joint searched to `mi`, then expanded to `support` symbols
/// per side (support must be even).
ConcatGenerator support_sweep_preset(double mi, int support, std::uint64_t seed);
/// One binary pair at `mi` plus independent fair-coin pairs; `length` is
/// the total M (even).
ConcatGenerator length_sweep_preset(double mi, int length, std::uint64_t seed);
/// `length` binary pairs (X and Y each of that length), each carrying
/// mi / length.
ConcatGenerator mi_sweep_preset(double mi, int length, std::uint64_t seed);

}  // namespace infosedd
