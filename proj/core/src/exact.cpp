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

#include "infosedd/exact.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "infosedd/ctmc.hpp"
#include "infosedd/error.hpp"
#include "infosedd/quadrature.hpp"

namespace infosedd {
namespace {

// base^exp, or nullopt on exceeding `limit`.
std::optional<std::uint64_t> bounded_pow(std::uint64_t base, int exp,
                                         std::uint64_t limit) {
  std::uint64_t value = 1;
  for (int k = 0; k < exp; ++k) {
    if (value > limit / base) return std::nullopt;
    value *= base;
  }
  return value;
}

std::uint64_t checked_state_count(int length, int vocab) {
  if (length < 1 || vocab < 1 || vocab > kMaxVocab) {
    throw InvalidInput("ExactPMF: need M >= 1 and N in [1, 65534]");
  }
  auto count = bounded_pow(static_cast<std::uint64_t>(vocab), length,
                           kOracleStateBound);
  if (!count) {
    throw ScaleBoundExceeded("ExactPMF: N^M exceeds the oracle bound 2^20");
  }
  return *count;
}

double xlogx_ratio(double p, double q) {
  return p > 0.0 ? p * std::log(p / q) : 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// ExactPMF

ExactPMF::ExactPMF(int length, int vocab, std::vector<double> probs,
                   std::optional<int> block_split)
    : length_(length),
      vocab_(vocab),
      probs_(std::move(probs)),
      block_split_(block_split) {
  const std::uint64_t n_states = checked_state_count(length, vocab);
  if (probs_.size() != n_states) {
    throw InvalidInput("ExactPMF: expected " + std::to_string(n_states) +
                       " probabilities, got " + std::to_string(probs_.size()));
  }
  if (block_split_ && (*block_split_ < 1 || *block_split_ >= length_)) {
    throw InvalidInput("ExactPMF: block_split must lie in [1, M)");
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw InvalidInput("ExactPMF: probabilities must be finite and >= 0");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidInput("ExactPMF: probabilities sum to " +
                       std::to_string(total));
  }
  for (double& p : probs_) p /= total;
}

ExactPMF ExactPMF::uniform(int length, int vocab,
                           std::optional<int> block_split) {
  const std::uint64_t n = checked_state_count(length, vocab);
  return ExactPMF(length, vocab,
                  std::vector<double>(n, 1.0 / static_cast<double>(n)),
                  block_split);
}

ExactPMF ExactPMF::point_mass(const std::vector<Token>& x, int vocab,
                              std::optional<int> block_split) {
  const int length = static_cast<int>(x.size());
  const std::uint64_t n = checked_state_count(length, vocab);
  std::vector<double> probs(n, 0.0);
  std::uint64_t index = 0;
  for (Token tok : x) {
    if (tok >= vocab) throw InvalidInput("point_mass: token out of range");
    index = index * vocab + tok;
  }
  probs[index] = 1.0;
  return ExactPMF(length, vocab, std::move(probs), block_split);
}

ExactPMF ExactPMF::product(const std::vector<std::vector<double>>& marginals,
                           std::optional<int> block_split) {
  if (marginals.empty()) throw InvalidInput("product: no marginals");
  const int vocab = static_cast<int>(marginals.front().size());
  for (const auto& m : marginals) {
    if (static_cast<int>(m.size()) != vocab) {
      throw InvalidInput("product: marginals must share the vocabulary");
    }
  }
  const int length = static_cast<int>(marginals.size());
  const std::uint64_t n = checked_state_count(length, vocab);
  std::vector<double> probs(n, 1.0);
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    std::uint64_t rest = idx;
    double p = 1.0;
    for (int k = length - 1; k >= 0; --k) {
      p *= marginals[k][rest % vocab];
      rest /= vocab;
    }
    probs[idx] = p;
  }
  return ExactPMF(length, vocab, std::move(probs), block_split);
}

ExactPMF ExactPMF::joint_matrix(const std::vector<std::vector<double>>& rows) {
  const int vocab = static_cast<int>(rows.size());
  std::vector<double> probs;
  probs.reserve(static_cast<std::size_t>(vocab) * vocab);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != vocab) {
      throw InvalidInput("joint_matrix: matrix must be square");
    }
    probs.insert(probs.end(), row.begin(), row.end());
  }
  return ExactPMF(2, vocab, std::move(probs), 1);
}

std::uint64_t ExactPMF::index_of(std::span<const Token> x) const {
  if (static_cast<int>(x.size()) != length_) {
    throw InvalidInput("ExactPMF::index_of: length mismatch");
  }
  std::uint64_t index = 0;
  for (Token tok : x) {
    if (tok >= vocab_) throw InvalidInput("ExactPMF::index_of: bad token");
    index = index * vocab_ + tok;
  }
  return index;
}

std::vector<Token> ExactPMF::tokens_of(std::uint64_t index) const {
  std::vector<Token> x(static_cast<std::size_t>(length_));
  for (int k = length_ - 1; k >= 0; --k) {
    x[k] = static_cast<Token>(index % vocab_);
    index /= vocab_;
  }
  return x;
}

ExactPMF ExactPMF::with_block_split(std::optional<int> split) const {
  return ExactPMF(length_, vocab_, probs_, split);
}

nlohmann::json ExactPMF::to_json() const {
  nlohmann::json j;
  j["M"] = length_;
  j["N"] = vocab_;
  j["block_split"] = block_split_ ? nlohmann::json(*block_split_)
                                  : nlohmann::json(nullptr);
  j["probs"] = probs_;
  return j;
}

ExactPMF ExactPMF::from_json(const nlohmann::json& j) {
  try {
    std::optional<int> split;
    if (j.contains("block_split") && !j.at("block_split").is_null()) {
      split = j.at("block_split").get<int>();
    }
    return ExactPMF(j.at("M").get<int>(), j.at("N").get<int>(),
                    j.at("probs").get<std::vector<double>>(), split);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("ExactPMF JSON: ") + e.what());
  }
}

ExactPMF ExactPMF::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open pmf file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("pmf file " + path + ": " + e.what());
  }
  return from_json(j);
}

void ExactPMF::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write pmf file " + path);
  out << to_json().dump() << '\n';
}

// ---------------------------------------------------------------------------
// Sampling

PmfSampler::PmfSampler(const ExactPMF& pmf)
    : cdf_(pmf.size()), length_(pmf.length()), vocab_(pmf.vocab()) {
  double acc = 0.0;
  for (std::uint64_t i = 0; i < pmf.size(); ++i) {
    acc += pmf[i];
    cdf_[i] = acc;
  }
  for (auto& c : cdf_) c /= acc;
  cdf_.back() = 1.0;
}

std::uint64_t PmfSampler::sample_index(Rng& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<std::uint64_t>(it - cdf_.begin());
}

void PmfSampler::sample(Rng& rng, std::span<Token> out) const {
  std::uint64_t index = sample_index(rng);
  for (int k = length_ - 1; k >= 0; --k) {
    out[k] = static_cast<Token>(index % vocab_);
    index /= vocab_;
  }
}

// ---------------------------------------------------------------------------
// Information quantities

BlockShape block_shape(const ExactPMF& joint) {
  if (!joint.block_split()) {
    throw InvalidInput("joint pmf needs a block_split");
  }
  const int b = *joint.block_split();
  std::uint64_t x_size = 1;
  for (int k = 0; k < b; ++k) x_size *= joint.vocab();
  return {x_size, joint.size() / x_size};
}

namespace {

std::pair<std::vector<double>, std::vector<double>> block_marginals(
    const ExactPMF& joint) {
  const auto [nx, ny] = block_shape(joint);
  std::vector<double> px(nx, 0.0);
  std::vector<double> py(ny, 0.0);
  for (std::uint64_t x = 0; x < nx; ++x) {
    for (std::uint64_t y = 0; y < ny; ++y) {
      const double p = joint[x * ny + y];
      px[x] += p;
      py[y] += p;
    }
  }
  return {std::move(px), std::move(py)};
}

}  // namespace

ExactPMF product_of_marginals(const ExactPMF& joint) {
  const auto [nx, ny] = block_shape(joint);
  const auto [px, py] = block_marginals(joint);
  std::vector<double> probs(joint.size());
  for (std::uint64_t x = 0; x < nx; ++x) {
    for (std::uint64_t y = 0; y < ny; ++y) probs[x * ny + y] = px[x] * py[y];
  }
  return ExactPMF(joint.length(), joint.vocab(), std::move(probs),
                  joint.block_split());
}

ExactPMF marginal_x(const ExactPMF& joint) {
  auto [px, py] = block_marginals(joint);
  return ExactPMF(*joint.block_split(), joint.vocab(), std::move(px));
}

ExactPMF marginal_y(const ExactPMF& joint) {
  auto [px, py] = block_marginals(joint);
  return ExactPMF(joint.length() - *joint.block_split(), joint.vocab(),
                  std::move(py));
}

double exact_mi(const ExactPMF& joint) {
  const auto [nx, ny] = block_shape(joint);
  const auto [px, py] = block_marginals(joint);
  double mi = 0.0;
  for (std::uint64_t x = 0; x < nx; ++x) {
    for (std::uint64_t y = 0; y < ny; ++y) {
      mi += xlogx_ratio(joint[x * ny + y], px[x] * py[y]);
    }
  }
  return std::max(mi, 0.0);
}

double exact_entropy(const ExactPMF& p) {
  double h = 0.0;
  for (double v : p.probs()) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return std::max(h, 0.0);
}

double exact_kl(const ExactPMF& p, const ExactPMF& q) {
  if (p.length() != q.length() || p.vocab() != q.vocab()) {
    throw InvalidInput("exact_kl: shape mismatch");
  }
  double kl = 0.0;
  for (std::uint64_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0 && q[i] == 0.0) {
      throw AbsoluteContinuityViolation("exact_kl: q = 0 where p > 0");
    }
    kl += xlogx_ratio(p[i], q[i]);
  }
  return std::max(kl, 0.0);
}

// ---------------------------------------------------------------------------
// Masked-state agreement probabilities

AgreementTable::AgreementTable(const ExactPMF& p0)
    : length_(p0.length()), vocab_(p0.vocab()) {
  const int n = vocab_;
  if (!bounded_pow(static_cast<std::uint64_t>(n) + 1, length_,
                   kAgreementCacheBound)) {
    throw ScaleBoundExceeded(
        "AgreementTable: (N+1)^M exceeds the masked-state cache bound");
  }
  strides_.assign(static_cast<std::size_t>(length_), 1);
  for (int k = length_ - 2; k >= 0; --k) {
    strides_[k] = strides_[k + 1] * static_cast<std::uint64_t>(n + 1);
  }

  // Expand one axis at a time from N values to N+1, the extra slot holding
  // the sum over that axis.
  std::vector<double> current(p0.probs().begin(), p0.probs().end());
  std::uint64_t outer = 1;
  for (int axis = 0; axis < length_; ++axis) {
    std::uint64_t inner = 1;
    for (int k = axis + 1; k < length_; ++k) inner *= n;
    std::vector<double> next(outer * (n + 1) * inner, 0.0);
    for (std::uint64_t o = 0; o < outer; ++o) {
      const double* src = current.data() + o * n * inner;
      double* dst = next.data() + o * (n + 1) * inner;
      double* mask_slot = dst + static_cast<std::uint64_t>(n) * inner;
      for (int v = 0; v < n; ++v) {
        for (std::uint64_t r = 0; r < inner; ++r) {
          dst[v * inner + r] = src[v * inner + r];
          mask_slot[r] += src[v * inner + r];
        }
      }
    }
    current = std::move(next);
    outer *= static_cast<std::uint64_t>(n + 1);
  }
  table_ = std::move(current);
}

std::uint64_t AgreementTable::index_of(std::span<const Token> x_t) const {
  if (static_cast<int>(x_t.size()) != length_) {
    throw InvalidInput("AgreementTable: length mismatch");
  }
  std::uint64_t index = 0;
  for (Token tok : x_t) {
    if (tok > vocab_) throw InvalidInput("AgreementTable: bad token");
    index = index * static_cast<std::uint64_t>(vocab_ + 1) + tok;
  }
  return index;
}

double AgreementTable::at(std::span<const Token> x_t) const {
  return table_[index_of(x_t)];
}

double agreement_probability(const ExactPMF& p0, std::span<const Token> x_t) {
  const int m = p0.length();
  const int n = p0.vocab();
  if (static_cast<int>(x_t.size()) != m) {
    throw InvalidInput("agreement_probability: length mismatch");
  }
  std::vector<int> masked;
  std::uint64_t base = 0;
  std::vector<std::uint64_t> strides(static_cast<std::size_t>(m), 1);
  for (int k = m - 2; k >= 0; --k) strides[k] = strides[k + 1] * n;
  for (int k = 0; k < m; ++k) {
    if (x_t[k] == n) {
      masked.push_back(k);
    } else if (x_t[k] < n) {
      base += x_t[k] * strides[k];
    } else {
      throw InvalidInput("agreement_probability: bad token");
    }
  }
  // Odometer over the masked coordinates.
  std::vector<int> digits(masked.size(), 0);
  double total = 0.0;
  while (true) {
    std::uint64_t index = base;
    for (std::size_t j = 0; j < masked.size(); ++j) {
      index += digits[j] * strides[masked[j]];
    }
    total += p0[index];
    std::size_t j = 0;
    while (j < digits.size() && ++digits[j] == n) digits[j++] = 0;
    if (j == digits.size()) break;
  }
  return total;
}

std::vector<double> exact_time_marginal(const ExactPMF& p0,
                                        const NoiseSchedule& schedule,
                                        double t) {
  const AgreementTable table(p0);
  const TokenKernel kernel = token_kernel(schedule, t);
  const int m = p0.length();
  const int n = p0.vocab();
  std::vector<double> keep_pow(m + 1), absorb_pow(m + 1);
  for (int a = 0; a <= m; ++a) {
    absorb_pow[a] = std::pow(kernel.absorb_prob, a);
    keep_pow[a] = std::pow(kernel.keep_prob, m - a);
  }
  std::vector<double> marginal(table.size());
  std::vector<int> digits(static_cast<std::size_t>(m), 0);
  int masked = 0;
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    marginal[idx] = absorb_pow[masked] * keep_pow[masked] * table.at(idx);
    // Advance the base-(N+1) odometer, last token fastest.
    for (int k = m - 1; k >= 0; --k) {
      if (digits[k] == n) --masked;
      if (++digits[k] <= n) {
        if (digits[k] == n) ++masked;
        break;
      }
      digits[k] = 0;
    }
  }
  return marginal;
}

double exact_score_ratio(const ExactPMF& p0, const NoiseSchedule& schedule,
                         double t, const TokenSeq& x_t, int position,
                         Token candidate) {
  if (x_t.length() != p0.length() || x_t.vocab() != p0.vocab()) {
    throw InvalidInput("exact_score_ratio: shape mismatch");
  }
  if (position < 0 || position >= x_t.length() || !x_t.is_masked(position)) {
    throw InvalidInput("exact_score_ratio: position is not masked");
  }
  if (candidate >= p0.vocab()) {
    throw InvalidInput("exact_score_ratio: candidate must be < N");
  }
  const double denom = agreement_probability(p0, x_t.tokens());
  if (denom == 0.0) return 0.0;
  std::vector<Token> y(x_t.tokens().begin(), x_t.tokens().end());
  y[position] = candidate;
  const double numer = agreement_probability(p0, y);
  return unmask_kernel_ratio(schedule.sigma_bar(t)) * numer / denom;
}

// ---------------------------------------------------------------------------
// ExactScoreSource

ExactScoreSource::ExactScoreSource(ExactPMF p0, NoiseSchedule schedule)
    : pmf_(std::move(p0)), schedule_(schedule) {
  if (bounded_pow(static_cast<std::uint64_t>(pmf_.vocab()) + 1, pmf_.length(),
                  kAgreementCacheBound)) {
    table_.emplace(pmf_);
  }
}

void ExactScoreSource::score_ratios(std::span<const Token> states,
                                    std::span<const double> times,
                                    std::span<double> out) const {
  const int m = length();
  const int n = vocab();
  const std::size_t rows = times.size();
  if (states.size() != rows * m || out.size() != rows * m * n) {
    throw InvalidInput("ExactScoreSource: buffer size mismatch");
  }
  std::vector<Token> scratch(static_cast<std::size_t>(m));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto x = states.subspan(r * m, m);
    double* dst = out.data() + r * m * n;
    std::fill(dst, dst + m * n, 0.0);
    const double c = unmask_kernel_ratio(schedule_.sigma_bar(times[r]));
    if (table_) {
      const std::uint64_t idx = table_->index_of(x);
      const double denom = table_->at(idx);
      if (denom == 0.0) continue;
      for (int i = 0; i < m; ++i) {
        if (x[i] != n) continue;
        const std::uint64_t base = idx - static_cast<std::uint64_t>(n) *
                                             table_->stride(i);
        for (int v = 0; v < n; ++v) {
          dst[i * n + v] = c * table_->at(base + v * table_->stride(i)) / denom;
        }
      }
    } else {
      const double denom = agreement_probability(pmf_, x);
      if (denom == 0.0) continue;
      std::copy(x.begin(), x.end(), scratch.begin());
      for (int i = 0; i < m; ++i) {
        if (x[i] != n) continue;
        for (int v = 0; v < n; ++v) {
          scratch[i] = static_cast<Token>(v);
          dst[i * n + v] = c * agreement_probability(pmf_, scratch) / denom;
        }
        scratch[i] = static_cast<Token>(n);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// CTMC KL functional

namespace {

// Bregman-type integrand term for normalized ratios a = s_p / c, b = s_q / c.
double divergence_term(double a, double b) {
  if (a == 0.0) return b;
  return a * std::log(a / b) - a + b;
}

void check_support(const ExactPMF& p0, const ExactPMF& q0) {
  if (p0.length() != q0.length() || p0.vocab() != q0.vocab()) {
    throw InvalidInput("exact_kl_ctmc: p0 and q0 must share shape");
  }
  for (std::uint64_t i = 0; i < p0.size(); ++i) {
    if (p0[i] > 0.0 && q0[i] == 0.0) {
      throw AbsoluteContinuityViolation(
          "exact_kl_ctmc: q0 = 0 where p0 > 0; divergence is infinite");
    }
  }
}

// E_{x_t ~ p_t}[sum_i sum_n term] / c, exhaustive over masked states.
double exhaustive_expectation(const AgreementTable& ap,
                              const AgreementTable& aq, double keep,
                              double absorb) {
  const int m = ap.length();
  const int n = ap.vocab();
  std::vector<double> weight(m + 1);
  for (int a = 0; a <= m; ++a) {
    weight[a] = std::pow(absorb, a) * std::pow(keep, m - a);
  }
  std::vector<int> digits(static_cast<std::size_t>(m), 0);
  int masked = 0;
  double total = 0.0;
  for (std::uint64_t idx = 0; idx < ap.size(); ++idx) {
    const double denom_p = ap.at(idx);
    if (masked > 0 && denom_p > 0.0) {
      const double denom_q = aq.at(idx);
      double inner = 0.0;
      for (int i = 0; i < m; ++i) {
        if (digits[i] != n) continue;
        const std::uint64_t base = idx - static_cast<std::uint64_t>(n) *
                                             ap.stride(i);
        for (int v = 0; v < n; ++v) {
          const std::uint64_t y = base + v * ap.stride(i);
          inner += divergence_term(ap.at(y) / denom_p, aq.at(y) / denom_q);
        }
      }
      total += weight[masked] * denom_p * inner;
    }
    for (int k = m - 1; k >= 0; --k) {
      if (digits[k] == n) --masked;
      if (++digits[k] <= n) {
        if (digits[k] == n) ++masked;
        break;
      }
      digits[k] = 0;
    }
  }
  return total;
}

double sampled_expectation(const ExactPMF& p0, const ExactPMF& q0,
                           const PmfSampler& sampler, double keep,
                           int samples, Rng& rng) {
  const int m = p0.length();
  const int n = p0.vocab();
  std::vector<Token> x0(m), xt(m), y(m);
  double total = 0.0;
  for (int s = 0; s < samples; ++s) {
    sampler.sample(rng, x0);
    if (perturb_tokens(x0, static_cast<Token>(n), keep, rng, xt) == 0) {
      continue;
    }
    const double denom_p = agreement_probability(p0, xt);
    const double denom_q = agreement_probability(q0, xt);
    y = xt;
    for (int i = 0; i < m; ++i) {
      if (xt[i] != n) continue;
      for (int v = 0; v < n; ++v) {
        y[i] = static_cast<Token>(v);
        total += divergence_term(agreement_probability(p0, y) / denom_p,
                                 agreement_probability(q0, y) / denom_q);
      }
      y[i] = static_cast<Token>(n);
    }
  }
  return total / samples;
}

}  // namespace

double exact_kl_integrand(const ExactPMF& p0, const ExactPMF& q0,
                          const NoiseSchedule& schedule, double t) {
  check_support(p0, q0);
  const AgreementTable ap(p0);
  const AgreementTable aq(q0);
  const TokenKernel kernel = token_kernel(schedule, t);
  const double c = unmask_kernel_ratio(schedule.sigma_bar(t));
  return schedule.sigma(t) * c *
         exhaustive_expectation(ap, aq, kernel.keep_prob, kernel.absorb_prob);
}

double exact_kl_ctmc(const ExactPMF& p0, const ExactPMF& q0,
                     const NoiseSchedule& schedule,
                     const ExactKlOptions& options) {
  check_support(p0, q0);
  const QuadratureRule rule =
      gauss_legendre(options.time_nodes, kTimeEpsilon, schedule.horizon());
  const auto masked_states = bounded_pow(
      static_cast<std::uint64_t>(p0.vocab()) + 1, p0.length(),
      options.exhaustive_limit);

  double kl = 0.0;
  if (masked_states) {
    const AgreementTable ap(p0);
    const AgreementTable aq(q0);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double t = rule.nodes[k];
      const TokenKernel kernel = token_kernel(schedule, t);
      const double c = unmask_kernel_ratio(schedule.sigma_bar(t));
      kl += rule.weights[k] * schedule.sigma(t) * c *
            exhaustive_expectation(ap, aq, kernel.keep_prob,
                                   kernel.absorb_prob);
    }
  } else {
    const PmfSampler sampler(p0);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double t = rule.nodes[k];
      Rng rng = Rng::stream(options.seed, k);
      const TokenKernel kernel = token_kernel(schedule, t);
      const double c = unmask_kernel_ratio(schedule.sigma_bar(t));
      kl += rule.weights[k] * schedule.sigma(t) * c *
            sampled_expectation(p0, q0, sampler, kernel.keep_prob,
                                options.mc_samples_per_node, rng);
    }
  }
  return kl;
}

}  // namespace infosedd
