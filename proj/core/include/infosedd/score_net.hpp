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

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "infosedd/schedule.hpp"
#include "infosedd/score_source.hpp"
#include "infosedd/tokens.hpp"

namespace infosedd {

/// How raw head outputs z[i][n] become ratios.
enum class Parameterization {
  /// s = exp(z). A zero head gives s = 1 everywhere.
  kRaw,
  /// s = c(t) * softmax_n(z[i]) with c(t) = 1 / (exp(sigma_bar(t)) - 1).
  /// The true absorbing-process ratio factors as c(t) times the conditional
  /// P0(x^i = n | unmasked coordinates), so the head only has to learn a
  /// time-independent categorical. A zero head gives the uniform ratio.
  kConditional,
};

struct NetArchitecture {
  int length = 2;         // M
  int vocab = 2;          // N
  int embed_dim = 16;     // d
  int width = 256;        // hidden width
  int depth = 4;          // residual blocks
  int time_features = 8;  // sinusoid frequencies of ln sigma_bar(t)
  Parameterization parameterization = Parameterization::kConditional;

  nlohmann::json to_json() const;
  static NetArchitecture from_json(const nlohmann::json& j);
  bool operator==(const NetArchitecture&) const = default;
};

/// One training example: clean sequence, its perturbation and the time.
struct DseBatch {
  int rows = 0;
  std::vector<Token> clean;      // rows x M
  std::vector<Token> perturbed;  // rows x M
  std::vector<double> times;     // rows
};

/// MLP score network over flattened token + positional embeddings.
///
/// Layout: e_i = E_tok[x_i] + E_pos[i] + W_t phi(t) + b_t for each position,
/// u = concat(e_0 .. e_{M-1}); h_0 = W_in u + b_in; each residual block does
/// h <- h + W_2 silu(W_1 h + b_1) + b_2; the head emits
/// z = W_out silu(h_L) + b_out with M x N entries. The head is zero at
/// initialization.
///
/// Position enters only through E_pos, the column block of W_in that reads
/// e_i, and the head rows for position i.
template <typename Scalar>
class ScoreNetT final : public ScoreSource {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using MatrixMap = Eigen::Map<Matrix>;
  using ConstMatrixMap = Eigen::Map<const Matrix>;

  struct ParamGroup {
    std::string name;
    Eigen::Index rows;
    Eigen::Index cols;
    Eigen::Index offset;
    Eigen::Index size() const { return rows * cols; }
  };

  ScoreNetT(const NetArchitecture& arch, const NoiseSchedule& schedule,
            std::uint64_t seed);

  int length() const override { return arch_.length; }
  int vocab() const override { return arch_.vocab; }
  const NetArchitecture& architecture() const { return arch_; }
  const NoiseSchedule& schedule() const { return schedule_; }

  Eigen::Index parameter_count() const { return params_.size(); }
  Vector& parameters() { return params_; }
  const Vector& parameters() const { return params_; }
  const std::vector<ParamGroup>& groups() const { return groups_; }
  const ParamGroup& group(const std::string& name) const;
  MatrixMap group_view(const std::string& name);

  /// Raw head outputs (rows x M x N, last index fastest).
  std::vector<double> logits(std::span<const Token> states,
                             std::span<const double> times) const;

  void score_ratios(std::span<const Token> states,
                    std::span<const double> times,
                    std::span<double> out) const override;
  using ScoreSource::score_ratios;

  /// Denoising score-entropy loss
  ///   mean_b sigma(t_b) sum_{i masked} sum_n [s - r ln s + K(r)],
  /// r = delta(n, x0_i) / (exp(sigma_bar) - 1). Writes d loss / d params
  /// into `grad` when non-null.
  double dse_loss(const DseBatch& batch, Vector* grad) const;

  /// Throws NumericFault if any parameter is NaN or infinite.
  void check_finite() const;

  /// Makes position `dst` an exact copy of position `src` in every
  /// position-specific parameter.
  void tie_positions(int src, int dst);

  void save(const std::string& path) const;
  /// Throws FormatError on a malformed file and ShapeMismatch when the
  /// stored (M, N) differ from the requested ones (0 = accept any).
  static ScoreNetT load(const std::string& path, int expected_length = 0,
                        int expected_vocab = 0);

 private:
  struct Workspace;

  void build_layout();
  void initialize(std::uint64_t seed);
  void forward(std::span<const Token> states, std::span<const double> times,
               Workspace& ws) const;
  void backward(std::span<const Token> states, const Workspace& ws,
                const Matrix& d_logits, Vector& grad) const;
  ConstMatrixMap view(const ParamGroup& g) const;
  Eigen::Map<Matrix> grad_view(const ParamGroup& g, Vector& grad) const;

  NetArchitecture arch_;
  NoiseSchedule schedule_;
  Vector params_;
  std::vector<ParamGroup> groups_;
};

using ScoreNet = ScoreNetT<float>;
using ScoreNet64 = ScoreNetT<double>;

extern template class ScoreNetT<float>;
extern template class ScoreNetT<double>;

/// Reads only the JSON header of a checkpoint file.
nlohmann::json read_checkpoint_header(const std::string& path);

}  // namespace infosedd
