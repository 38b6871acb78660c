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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "infosedd/rng.hpp"
#include "infosedd/schedule.hpp"
#include "infosedd/score_source.hpp"
#include "infosedd/tokens.hpp"

namespace infosedd {

/// Hard cap on N^M for explicit probability tables.
inline constexpr std::uint64_t kOracleStateBound = std::uint64_t{1} << 20;

/// Cap on (N+1)^M above which masked-state tables are not materialized and
/// agreement probabilities are summed on demand.
inline constexpr std::uint64_t kAgreementCacheBound = std::uint64_t{1} << 22;

/// Explicit pmf over {0..N-1}^M; entries in row-major token order, last
/// token fastest. With a block split b, X = tokens [0, b) and Y = [b, M).
class ExactPMF {
 public:
  ExactPMF(int length, int vocab, std::vector<double> probs,
           std::optional<int> block_split = std::nullopt);

  static ExactPMF uniform(int length, int vocab,
                          std::optional<int> block_split = std::nullopt);
  static ExactPMF point_mass(const std::vector<Token>& x, int vocab,
                             std::optional<int> block_split = std::nullopt);
  /// Product of independent per-token marginals.
  static ExactPMF product(const std::vector<std::vector<double>>& marginals,
                          std::optional<int> block_split = std::nullopt);
  /// A |X| x |Y| matrix as a two-token joint (M = 2, N = max(|X|, |Y|)
  /// must equal both sides), block split 1.
  static ExactPMF joint_matrix(const std::vector<std::vector<double>>& rows);

  int length() const { return length_; }
  int vocab() const { return vocab_; }
  std::uint64_t size() const { return probs_.size(); }
  const std::optional<int>& block_split() const { return block_split_; }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::uint64_t index) const { return probs_[index]; }
  double prob(std::span<const Token> x) const { return probs_[index_of(x)]; }

  std::uint64_t index_of(std::span<const Token> x) const;
  std::vector<Token> tokens_of(std::uint64_t index) const;

  ExactPMF with_block_split(std::optional<int> split) const;

  nlohmann::json to_json() const;
  static ExactPMF from_json(const nlohmann::json& j);
  static ExactPMF load(const std::string& path);
  void save(const std::string& path) const;

 private:
  int length_;
  int vocab_;
  std::vector<double> probs_;
  std::optional<int> block_split_;
};

/// Inverse-CDF sampler over an ExactPMF.
class PmfSampler {
 public:
  explicit PmfSampler(const ExactPMF& pmf);
  std::uint64_t sample_index(Rng& rng) const;
  void sample(Rng& rng, std::span<Token> out) const;
  int length() const { return length_; }
  int vocab() const { return vocab_; }

 private:
  std::vector<double> cdf_;
  int length_;
  int vocab_;
};

/// Joint viewed as a |X| x |Y| matrix along its block split.
struct BlockShape {
  std::uint64_t x_size;
  std::uint64_t y_size;
};
BlockShape block_shape(const ExactPMF& joint);

/// p^X (x) p^Y with the same shape and split as `joint`.
ExactPMF product_of_marginals(const ExactPMF& joint);

/// Marginal of the first `split` tokens (X) or of the rest (Y).
ExactPMF marginal_x(const ExactPMF& joint);
ExactPMF marginal_y(const ExactPMF& joint);

/// I(X;Y) = sum p(x,y) ln[p(x,y) / (p(x) p(y))], 0 ln 0 := 0.
double exact_mi(const ExactPMF& joint);
/// H(p) = -sum p ln p.
double exact_entropy(const ExactPMF& p);
/// KL(p || q) by direct summation; AbsoluteContinuityViolation if q = 0
/// where p > 0.
double exact_kl(const ExactPMF& p, const ExactPMF& q);

/// Probability of agreeing with a partially masked state on its unmasked
/// coordinates, A(x_t) = sum_{x0 ~ x_t} p0(x0). Indexed in base N+1 over
/// {0..N}^M (MASK = N), last token fastest.
class AgreementTable {
 public:
  explicit AgreementTable(const ExactPMF& p0);

  int length() const { return length_; }
  int vocab() const { return vocab_; }
  std::uint64_t size() const { return table_.size(); }
  double at(std::uint64_t masked_index) const { return table_[masked_index]; }
  double at(std::span<const Token> x_t) const;
  std::uint64_t index_of(std::span<const Token> x_t) const;
  std::uint64_t stride(int position) const { return strides_[position]; }
  std::span<const double> values() const { return table_; }

 private:
  int length_;
  int vocab_;
  std::vector<std::uint64_t> strides_;
  std::vector<double> table_;
};

/// On-demand agreement probability (no table); cost N^(masked count).
double agreement_probability(const ExactPMF& p0, std::span<const Token> x_t);

/// Full marginal p_t over the (N+1)^M masked states.
std::vector<double> exact_time_marginal(const ExactPMF& p0,
                                        const NoiseSchedule& schedule,
                                        double t);

/// True ratio p_t(x_t with position i := n) / p_t(x_t). Returns 0 when x_t
/// itself has probability 0. InvalidInput if position i is not masked.
double exact_score_ratio(const ExactPMF& p0, const NoiseSchedule& schedule,
                         double t, const TokenSeq& x_t, int position,
                         Token candidate);

/// ScoreSource backed by exact ratios of a known pmf.
class ExactScoreSource final : public ScoreSource {
 public:
  ExactScoreSource(ExactPMF p0, NoiseSchedule schedule);

  int length() const override { return pmf_.length(); }
  int vocab() const override { return pmf_.vocab(); }
  void score_ratios(std::span<const Token> states,
                    std::span<const double> times,
                    std::span<double> out) const override;
  using ScoreSource::score_ratios;

  const ExactPMF& pmf() const { return pmf_; }
  const NoiseSchedule& schedule() const { return schedule_; }

 private:
  ExactPMF pmf_;
  NoiseSchedule schedule_;
  std::optional<AgreementTable> table_;
};

struct ExactKlOptions {
  int time_nodes = 256;
  /// Masked-state count up to which the state expectation is exhaustive.
  std::uint64_t exhaustive_limit = std::uint64_t{1} << 16;
  /// Used above the exhaustive limit.
  int mc_samples_per_node = 4096;
  std::uint64_t seed = 0;
};

/// The CTMC KL functional
///   int_eps^T E_{x_t ~ p_t} [ sum_{i masked} sum_n sigma(t)
///       (K(s_p) + s_q - s_p ln s_q) ] dt
/// with exact ratios and Gauss-Legendre time quadrature. Approximates
/// KL(p0 || q0); throws AbsoluteContinuityViolation when KL is infinite.
double exact_kl_ctmc(const ExactPMF& p0, const ExactPMF& q0,
                     const NoiseSchedule& schedule,
                     const ExactKlOptions& options = {});

/// Time integrand of exact_kl_ctmc at a single t (exhaustive expectation).
double exact_kl_integrand(const ExactPMF& p0, const ExactPMF& q0,
                          const NoiseSchedule& schedule, double t);

}  // namespace infosedd
