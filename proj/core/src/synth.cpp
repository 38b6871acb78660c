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

#include "infosedd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "infosedd/error.hpp"

namespace infosedd {

namespace {
__extension__ typedef unsigned __int128 u128;
}  // namespace

ExactPMF random_pmf(int length, int vocab, std::optional<int> block_split,
                    Rng& rng) {
  double cells = 1.0;
  for (int i = 0; i < length; ++i) cells *= vocab;
  if (length < 1 || vocab < 1 || cells > static_cast<double>(kOracleStateBound)) {
    throw ScaleBoundExceeded("random_pmf: N^M exceeds the oracle bound");
  }
  std::vector<double> probs(static_cast<std::size_t>(cells));
  double total = 0.0;
  for (double& p : probs) {
    p = -std::log1p(-rng.uniform()) + 1e-12;
    total += p;
  }
  for (double& p : probs) p /= total;
  return ExactPMF(length, vocab, std::move(probs), block_split);
}

ExactPMF genome_to_pmf(const Genome& genome, int n) {
  if (n < 1 || genome.values.size() != static_cast<std::size_t>(n) * n) {
    throw InvalidInput("genome_to_pmf: genome size must be n * n");
  }
  if (!(genome.epsilon > 0.0)) throw InvalidInput("genome_to_pmf: epsilon must be > 0");
  double lo = genome.values[0];
  for (double v : genome.values) {
    if (!std::isfinite(v)) throw InvalidInput("genome_to_pmf: non-finite genome");
    lo = std::min(lo, v);
  }
  std::vector<double> probs(genome.values.size());
  double total = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    probs[k] = genome.values[k] - lo + genome.epsilon;
    total += probs[k];
  }
  for (double& p : probs) p /= total;
  return ExactPMF(2, n, std::move(probs), 1);
}

ESResult evolve_joint(const ESConfig& config, int n) {
  if (config.parents < 1 || config.population < config.parents) {
    throw InvalidInput("evolve_joint: need population >= parents >= 1");
  }
  if (!(config.tolerance > 0.0) || !(config.mutation_sigma > 0.0)) {
    throw InvalidInput("evolve_joint: tolerance and mutation_sigma must be > 0");
  }
  struct Individual {
    Genome genome;
    double fitness;
    double mi;
  };
  Rng rng(config.seed);
  auto evaluate = [&](Genome g) {
    const double mi = exact_mi(genome_to_pmf(g, n));
    return Individual{std::move(g), std::abs(mi - config.target_mi), mi};
  };
  const std::size_t cells = static_cast<std::size_t>(n) * n;

  std::vector<Individual> parents;
  parents.push_back(evaluate(Genome{std::vector<double>(cells, 0.0)}));
  while (static_cast<int>(parents.size()) < config.parents) {
    Genome g{std::vector<double>(cells)};
    for (double& v : g.values) v = rng.normal();
    parents.push_back(evaluate(std::move(g)));
  }
  auto by_fitness = [](const Individual& a, const Individual& b) {
    return a.fitness < b.fitness;
  };
  std::stable_sort(parents.begin(), parents.end(), by_fitness);

  double sigma = config.mutation_sigma;
  int generation = 0;
  while (parents.front().fitness > config.tolerance &&
         generation < config.max_generations) {
    ++generation;
    std::vector<Individual> pool = parents;
    int successes = 0;
    for (int k = 0; k < config.population; ++k) {
      const Individual& parent = parents[rng.below(parents.size())];
      Genome child = parent.genome;
      for (double& v : child.values) v += sigma * rng.normal();
      Individual ind = evaluate(std::move(child));
      successes += ind.fitness < parent.fitness;
      pool.push_back(std::move(ind));
    }
    std::stable_sort(pool.begin(), pool.end(), by_fitness);
    pool.resize(parents.size());
    parents = std::move(pool);
    const double rate = static_cast<double>(successes) / config.population;
    sigma *= rate > 0.2 ? 1.0 / 0.85 : (rate < 0.2 ? 0.85 : 1.0);
    sigma = std::clamp(sigma, 1e-8, 10.0);
  }
  const Individual& best = parents.front();
  return ESResult{genome_to_pmf(best.genome, n), best.mi,
                  best.fitness <= config.tolerance, generation};
}

std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y) {
  const u128 s = static_cast<u128>(x) + y;
  const u128 z = s * (s + 1) / 2 + y;
  if (z > std::numeric_limits<std::uint64_t>::max()) {
    throw RangeError("cantor_pair: result exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(z);
}

CantorPair cantor_unpair(std::uint64_t z) {
  // w = floor((sqrt(8z + 1) - 1) / 2), corrected for rounding.
  std::uint64_t w = static_cast<std::uint64_t>(
      (std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
  auto tri = [](std::uint64_t v) { return static_cast<u128>(v) * (v + 1) / 2; };
  while (w > 0 && tri(w) > z) --w;
  while (tri(w + 1) <= z) ++w;
  const std::uint64_t y = static_cast<std::uint64_t>(z - tri(w));
  return {w - y, y};
}

ExactPMF expand_support(const ExactPMF& joint, int n_noise, double p) {
  if (joint.length() != 2 || joint.block_split() != 1) {
    throw InvalidInput("expand_support: expects a two-token joint with split 1");
  }
  if (n_noise < 0) throw InvalidInput("expand_support: n_noise must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("expand_support: p must be in [0, 1]");
  const int n = joint.vocab();
  const std::uint64_t wide = static_cast<std::uint64_t>(n) * (n_noise + 1);
  if (wide > static_cast<std::uint64_t>(kMaxVocab) || wide * wide > kOracleStateBound) {
    throw ScaleBoundExceeded("expand_support: expanded joint exceeds the oracle bound");
  }
  std::vector<double> binom(n_noise + 1);
  for (int k = 0; k <= n_noise; ++k) {
    const double log_c = std::lgamma(n_noise + 1.0) - std::lgamma(k + 1.0) -
                         std::lgamma(n_noise - k + 1.0);
    const double lp = k == 0 ? 0.0 : k * std::log(p);
    const double lq = k == n_noise ? 0.0 : (n_noise - k) * std::log1p(-p);
    binom[k] = std::exp(log_c + lp + lq);
  }

  std::vector<std::uint64_t> paired;
  paired.reserve(wide);
  for (int x = 0; x < n; ++x) {
    for (int z = 0; z <= n_noise; ++z) paired.push_back(cantor_pair(x, z));
  }
  std::vector<std::uint64_t> sorted = paired;
  std::sort(sorted.begin(), sorted.end());
  auto dense = [&](int x, int z) {
    const std::uint64_t key = paired[static_cast<std::size_t>(x) * (n_noise + 1) + z];
    return static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), key) - sorted.begin());
  };

  std::vector<double> probs(wide * wide, 0.0);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const double pxy = joint[static_cast<std::uint64_t>(x) * n + y];
      for (int zx = 0; zx <= n_noise; ++zx) {
        for (int zy = 0; zy <= n_noise; ++zy) {
          probs[dense(x, zx) * wide + dense(y, zy)] = pxy * binom[zx] * binom[zy];
        }
      }
    }
  }
  return ExactPMF(2, static_cast<int>(wide), std::move(probs), 1);
}

ConcatGenerator::ConcatGenerator(std::vector<ExactPMF> parts)
    : parts_(std::move(parts)) {
  if (parts_.empty()) throw InvalidInput("ConcatGenerator: no parts");
  vocab_ = parts_.front().vocab();
  int x_total = 0;
  for (const auto& part : parts_) {
    if (part.vocab() != vocab_) {
      throw InvalidInput("ConcatGenerator: parts disagree on the per-token vocab");
    }
    if (!part.block_split()) throw InvalidInput("ConcatGenerator: part without block split");
    x_total += *part.block_split();
    length_ += part.length();
  }
  split_ = x_total;
  int x_at = 0;
  int y_at = x_total;
  for (const auto& part : parts_) {
    const int b = *part.block_split();
    x_offset_.push_back(x_at);
    y_offset_.push_back(y_at);
    x_at += b;
    y_at += part.length() - b;
    samplers_.emplace_back(part);
    mi_ += exact_mi(part);
    entropy_ += exact_entropy(part);
  }
}

void ConcatGenerator::sample(Rng& rng, std::span<Token> out) const {
  if (static_cast<int>(out.size()) != length_) {
    throw InvalidInput("ConcatGenerator::sample: output length mismatch");
  }
  Token buf[64];
  std::vector<Token> heap;
  for (std::size_t k = 0; k < parts_.size(); ++k) {
    const int len = parts_[k].length();
    std::span<Token> tmp;
    if (len <= 64) {
      tmp = std::span<Token>(buf, len);
    } else {
      heap.resize(len);
      tmp = heap;
    }
    samplers_[k].sample(rng, tmp);
    const int b = *parts_[k].block_split();
    for (int i = 0; i < b; ++i) out[x_offset_[k] + i] = tmp[i];
    for (int i = b; i < len; ++i) out[y_offset_[k] + i - b] = tmp[i];
  }
}

bool ConcatGenerator::has_explicit_joint() const {
  double states = 1.0;
  for (int i = 0; i < length_; ++i) states *= vocab_;
  return states <= static_cast<double>(kOracleStateBound);
}

ExactPMF ConcatGenerator::explicit_joint() const {
  if (!has_explicit_joint()) {
    throw ScaleBoundExceeded("ConcatGenerator: explicit joint exceeds the oracle bound");
  }
  std::uint64_t size = 1;
  for (int i = 0; i < length_; ++i) size *= vocab_;
  std::vector<double> probs(size);
  std::vector<Token> x(length_);
  std::vector<Token> part_tokens;
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    std::uint64_t rem = idx;
    for (int i = length_ - 1; i >= 0; --i) {
      x[i] = static_cast<Token>(rem % vocab_);
      rem /= vocab_;
    }
    double p = 1.0;
    for (std::size_t k = 0; k < parts_.size(); ++k) {
      const int len = parts_[k].length();
      const int b = *parts_[k].block_split();
      part_tokens.resize(len);
      for (int i = 0; i < b; ++i) part_tokens[i] = x[x_offset_[k] + i];
      for (int i = b; i < len; ++i) part_tokens[i] = x[y_offset_[k] + i - b];
      p *= parts_[k].prob(part_tokens);
    }
    probs[idx] = p;
  }
  return ExactPMF(length_, vocab_, std::move(probs), split_);
}

namespace {

constexpr std::size_t kSampleChunk = 4096;

template <typename Draw>
Dataset sample_rows(int length, int vocab, std::optional<int> split,
                    std::size_t n_rows, std::uint64_t seed, Draw&& draw) {
  if (n_rows < 1) throw InvalidInput("sample_dataset: n_rows must be >= 1");
  Dataset data(length, vocab, split);
  data.reserve(n_rows);
  std::vector<Token> row(length);
  for (std::size_t begin = 0, chunk = 0; begin < n_rows; begin += kSampleChunk, ++chunk) {
    Rng rng = Rng::stream(seed, chunk);
    const std::size_t end = std::min(n_rows, begin + kSampleChunk);
    for (std::size_t r = begin; r < end; ++r) {
      draw(rng, std::span<Token>(row));
      data.append(row);
    }
  }
  data.meta()["seed"] = seed;
  return data;
}

}  // namespace

Dataset sample_dataset(const ConcatGenerator& gen, std::size_t n_rows,
                       std::uint64_t seed) {
  Dataset data = sample_rows(gen.length(), gen.vocab(), gen.block_split(), n_rows,
                             seed, [&](Rng& rng, std::span<Token> out) {
                               gen.sample(rng, out);
                             });
  data.meta()["ground_truth_mi"] = gen.ground_truth_mi();
  data.meta()["ground_truth_entropy"] = gen.ground_truth_entropy();
  return data;
}

Dataset sample_dataset(const ExactPMF& pmf, std::size_t n_rows,
                       std::uint64_t seed) {
  const PmfSampler sampler(pmf);
  Dataset data = sample_rows(pmf.length(), pmf.vocab(), pmf.block_split(), n_rows,
                             seed, [&](Rng& rng, std::span<Token> out) {
                               sampler.sample(rng, out);
                             });
  if (pmf.block_split()) data.meta()["ground_truth_mi"] = exact_mi(pmf);
  data.meta()["ground_truth_entropy"] = exact_entropy(pmf);
  return data;
}

namespace {

ExactPMF binary_part(double mi, std::uint64_t seed) {
  ESConfig es;
  es.target_mi = mi;
  es.tolerance = 1e-4;
  es.seed = seed;
  ESResult result = evolve_joint(es, 2);
  if (!result.converged) {
    throw NumericFault("evolution strategy did not reach MI " + std::to_string(mi) +
                       " (best " + std::to_string(result.achieved_mi) + ")");
  }
  return std::move(result.joint);
}

}  // namespace

ConcatGenerator support_sweep_preset(double mi, int support, std::uint64_t seed) {
  if (support < 2 || support % 2 != 0) {
    throw InvalidInput("support-sweep: support must be an even number >= 2");
  }
  ExactPMF base = binary_part(mi, seed);
  std::vector<ExactPMF> parts;
  parts.push_back(expand_support(base, support / 2 - 1, 0.5));
  return ConcatGenerator(std::move(parts));
}

ConcatGenerator length_sweep_preset(double mi, int length, std::uint64_t seed) {
  if (length < 2 || length % 2 != 0) {
    throw InvalidInput("length-sweep: length must be an even number >= 2");
  }
  std::vector<ExactPMF> parts;
  parts.push_back(binary_part(mi, seed));
  for (int k = 1; k < length / 2; ++k) parts.push_back(ExactPMF::uniform(2, 2, 1));
  return ConcatGenerator(std::move(parts));
}

ConcatGenerator mi_sweep_preset(double mi, int length, std::uint64_t seed) {
  if (length < 1) throw InvalidInput("mi-sweep: length must be >= 1");
  if (mi < 0.0) throw InvalidInput("mi-sweep: mi must be >= 0");
  const ExactPMF part = binary_part(mi / length, seed);
  return ConcatGenerator(std::vector<ExactPMF>(static_cast<std::size_t>(length), part));
}

}  // namespace infosedd
