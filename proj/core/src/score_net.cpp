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

#include "infosedd/score_net.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "infosedd/error.hpp"
#include "infosedd/rng.hpp"

namespace infosedd {

namespace {

constexpr char kCheckpointMagic[8] = {'I', 'S', 'E', 'D', 'D', 'C', 'K', '1'};
constexpr int kEvalChunk = 256;

const char* parameterization_name(Parameterization p) {
  return p == Parameterization::kRaw ? "raw" : "conditional";
}

Parameterization parameterization_from(const std::string& name) {
  if (name == "raw") return Parameterization::kRaw;
  if (name == "conditional") return Parameterization::kConditional;
  throw FormatError("unknown parameterization '" + name + "'");
}

template <typename M>
auto silu(const M& x) {
  return x.unaryExpr([](auto v) {
    using S = decltype(v);
    return v / (S(1) + std::exp(-v));
  });
}

template <typename M>
auto silu_grad(const M& x) {
  return x.unaryExpr([](auto v) {
    using S = decltype(v);
    const S sig = S(1) / (S(1) + std::exp(-v));
    return sig * (S(1) + v * (S(1) - sig));
  });
}

double k_or_zero(double r) { return r > 0.0 ? r * (std::log(r) - 1.0) : 0.0; }

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (in.gcount() != 8) throw FormatError("checkpoint: truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

struct ParsedHeader {
  nlohmann::json json;
  std::streamoff block_offset;
};

ParsedHeader parse_header(std::istream& in, const std::string& path) {
  char magic[8];
  in.read(magic, 8);
  if (in.gcount() != 8 || std::memcmp(magic, kCheckpointMagic, 8) != 0) {
    throw FormatError("checkpoint " + path + ": bad magic");
  }
  const std::uint64_t header_len = read_u64(in);
  if (header_len == 0 || header_len > (1u << 20)) {
    throw FormatError("checkpoint " + path + ": implausible header length");
  }
  std::string text(header_len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(header_len));
  if (static_cast<std::uint64_t>(in.gcount()) != header_len) {
    throw FormatError("checkpoint " + path + ": truncated header");
  }
  ParsedHeader parsed;
  try {
    parsed.json = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("checkpoint " + path + ": corrupted header: " + e.what());
  }
  parsed.block_offset = static_cast<std::streamoff>(16 + header_len);
  return parsed;
}

}  // namespace

// ---------------------------------------------------------------------------
// NetArchitecture

nlohmann::json NetArchitecture::to_json() const {
  return nlohmann::json{{"M", length},
                        {"N", vocab},
                        {"embed_dim", embed_dim},
                        {"width", width},
                        {"depth", depth},
                        {"time_features", time_features},
                        {"parameterization",
                         parameterization_name(parameterization)}};
}

NetArchitecture NetArchitecture::from_json(const nlohmann::json& j) {
  try {
    NetArchitecture a;
    a.length = j.at("M").get<int>();
    a.vocab = j.at("N").get<int>();
    a.embed_dim = j.at("embed_dim").get<int>();
    a.width = j.at("width").get<int>();
    a.depth = j.at("depth").get<int>();
    a.time_features = j.at("time_features").get<int>();
    a.parameterization =
        parameterization_from(j.at("parameterization").get<std::string>());
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("architecture: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// ScoreNetT

template <typename Scalar>
struct ScoreNetT<Scalar>::Workspace {
  Matrix phi;
  Matrix tau;
  Matrix u;
  std::vector<Matrix> h;  // depth + 1
  std::vector<Matrix> z;  // depth
  std::vector<Matrix> a;  // depth
  Matrix s;
  Matrix logits;
};

template <typename Scalar>
ScoreNetT<Scalar>::ScoreNetT(const NetArchitecture& arch,
                             const NoiseSchedule& schedule, std::uint64_t seed)
    : arch_(arch), schedule_(schedule) {
  if (arch.length < 1 || arch.vocab < 1 || arch.vocab > kMaxVocab ||
      arch.embed_dim < 1 || arch.width < 1 || arch.depth < 0 ||
      arch.time_features < 1) {
    throw InvalidInput("ScoreNet: invalid architecture");
  }
  build_layout();
  initialize(seed);
}

template <typename Scalar>
void ScoreNetT<Scalar>::build_layout() {
  const Eigen::Index m = arch_.length;
  const Eigen::Index n = arch_.vocab;
  const Eigen::Index d = arch_.embed_dim;
  const Eigen::Index w = arch_.width;
  const Eigen::Index f = 2 * arch_.time_features;
  Eigen::Index offset = 0;
  auto add = [&](std::string name, Eigen::Index rows, Eigen::Index cols) {
    groups_.push_back({std::move(name), rows, cols, offset});
    offset += rows * cols;
  };
  add("tok_emb", d, n + 1);
  add("pos_emb", d, m);
  add("time_w", d, f);
  add("time_b", d, 1);
  add("in_w", w, m * d);
  add("in_b", w, 1);
  for (int k = 0; k < arch_.depth; ++k) {
    const std::string p = "block" + std::to_string(k) + ".";
    add(p + "w1", w, w);
    add(p + "b1", w, 1);
    add(p + "w2", w, w);
    add(p + "b2", w, 1);
  }
  add("out_w", m * n, w);
  add("out_b", m * n, 1);
  params_ = Vector::Zero(offset);
}

template <typename Scalar>
void ScoreNetT<Scalar>::initialize(std::uint64_t seed) {
  Rng rng(seed);
  auto fill = [&](const std::string& name, double stddev) {
    auto v = group_view(name);
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      for (Eigen::Index i = 0; i < v.rows(); ++i) {
        v(i, j) = static_cast<Scalar>(stddev * rng.normal());
      }
    }
  };
  const double w = arch_.width;
  fill("tok_emb", std::sqrt(0.5));
  fill("pos_emb", std::sqrt(0.5));
  fill("time_w", 0.5 / std::sqrt(2.0 * arch_.time_features));
  fill("in_w", 1.0 / std::sqrt(static_cast<double>(arch_.length) *
                               arch_.embed_dim));
  for (int k = 0; k < arch_.depth; ++k) {
    const std::string p = "block" + std::to_string(k) + ".";
    fill(p + "w1", 1.0 / std::sqrt(w));
    fill(p + "w2", 0.5 / std::sqrt(w * arch_.depth));
  }
  // Biases and the head stay zero.
}

template <typename Scalar>
const typename ScoreNetT<Scalar>::ParamGroup& ScoreNetT<Scalar>::group(
    const std::string& name) const {
  for (const auto& g : groups_) {
    if (g.name == name) return g;
  }
  throw InvalidInput("ScoreNet: no parameter group '" + name + "'");
}

template <typename Scalar>
typename ScoreNetT<Scalar>::MatrixMap ScoreNetT<Scalar>::group_view(
    const std::string& name) {
  const ParamGroup& g = group(name);
  return MatrixMap(params_.data() + g.offset, g.rows, g.cols);
}

template <typename Scalar>
typename ScoreNetT<Scalar>::ConstMatrixMap ScoreNetT<Scalar>::view(
    const ParamGroup& g) const {
  return ConstMatrixMap(params_.data() + g.offset, g.rows, g.cols);
}

template <typename Scalar>
Eigen::Map<typename ScoreNetT<Scalar>::Matrix> ScoreNetT<Scalar>::grad_view(
    const ParamGroup& g, Vector& grad) const {
  return Eigen::Map<Matrix>(grad.data() + g.offset, g.rows, g.cols);
}

template <typename Scalar>
void ScoreNetT<Scalar>::forward(std::span<const Token> states,
                                std::span<const double> times,
                                Workspace& ws) const {
  const int m = arch_.length;
  const int d = arch_.embed_dim;
  const int f = arch_.time_features;
  const Eigen::Index batch = static_cast<Eigen::Index>(times.size());
  if (states.size() != static_cast<std::size_t>(batch) * m) {
    throw InvalidInput("ScoreNet: states/times size mismatch");
  }

  ws.phi.resize(2 * f, batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    const double sb = schedule_.sigma_bar(times[b]);
    if (!(sb > 0.0)) throw DomainError("ScoreNet: needs sigma_bar(t) > 0");
    const double u = std::log(sb);
    for (int k = 0; k < f; ++k) {
      const double omega = f == 1 ? 1.0 : 0.05 * std::pow(40.0, double(k) / (f - 1));
      ws.phi(2 * k, b) = static_cast<Scalar>(std::sin(omega * u));
      ws.phi(2 * k + 1, b) = static_cast<Scalar>(std::cos(omega * u));
    }
  }

  const auto tok = view(groups_[0]);
  const auto pos = view(groups_[1]);
  const auto time_w = view(groups_[2]);
  const auto time_b = view(groups_[3]);
  const auto in_w = view(groups_[4]);
  const auto in_b = view(groups_[5]);

  ws.tau.noalias() = time_w * ws.phi;
  ws.tau.colwise() += time_b.col(0);

  ws.u.resize(static_cast<Eigen::Index>(m) * d, batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    const Token* x = states.data() + b * m;
    for (int i = 0; i < m; ++i) {
      if (x[i] > arch_.vocab) throw InvalidInput("ScoreNet: token out of range");
      ws.u.block(static_cast<Eigen::Index>(i) * d, b, d, 1) =
          tok.col(x[i]) + pos.col(i) + ws.tau.col(b);
    }
  }

  ws.h.resize(arch_.depth + 1);
  ws.z.resize(arch_.depth);
  ws.a.resize(arch_.depth);
  ws.h[0].noalias() = in_w * ws.u;
  ws.h[0].colwise() += in_b.col(0);
  for (int k = 0; k < arch_.depth; ++k) {
    const auto& w1 = view(groups_[6 + 4 * k]);
    const auto& b1 = view(groups_[7 + 4 * k]);
    const auto& w2 = view(groups_[8 + 4 * k]);
    const auto& b2 = view(groups_[9 + 4 * k]);
    ws.z[k].noalias() = w1 * ws.h[k];
    ws.z[k].colwise() += b1.col(0);
    ws.a[k] = silu(ws.z[k]);
    ws.h[k + 1] = ws.h[k];
    ws.h[k + 1].noalias() += w2 * ws.a[k];
    ws.h[k + 1].colwise() += b2.col(0);
  }
  const auto out_w = view(groups_[groups_.size() - 2]);
  const auto out_b = view(groups_[groups_.size() - 1]);
  ws.s = silu(ws.h[arch_.depth]);
  ws.logits.noalias() = out_w * ws.s;
  ws.logits.colwise() += out_b.col(0);
}

template <typename Scalar>
void ScoreNetT<Scalar>::backward(std::span<const Token> states,
                                 const Workspace& ws, const Matrix& d_logits,
                                 Vector& grad) const {
  const int m = arch_.length;
  const int d = arch_.embed_dim;
  const Eigen::Index batch = d_logits.cols();
  const ParamGroup& g_out_w = groups_[groups_.size() - 2];
  const ParamGroup& g_out_b = groups_[groups_.size() - 1];

  grad_view(g_out_w, grad).noalias() += d_logits * ws.s.transpose();
  grad_view(g_out_b, grad) += d_logits.rowwise().sum();
  Matrix dh = (view(g_out_w).transpose() * d_logits).cwiseProduct(
      silu_grad(ws.h[arch_.depth]));

  for (int k = arch_.depth - 1; k >= 0; --k) {
    const ParamGroup& gw1 = groups_[6 + 4 * k];
    const ParamGroup& gb1 = groups_[7 + 4 * k];
    const ParamGroup& gw2 = groups_[8 + 4 * k];
    const ParamGroup& gb2 = groups_[9 + 4 * k];
    grad_view(gw2, grad).noalias() += dh * ws.a[k].transpose();
    grad_view(gb2, grad) += dh.rowwise().sum();
    const Matrix dz =
        (view(gw2).transpose() * dh).cwiseProduct(silu_grad(ws.z[k]));
    grad_view(gw1, grad).noalias() += dz * ws.h[k].transpose();
    grad_view(gb1, grad) += dz.rowwise().sum();
    dh.noalias() += view(gw1).transpose() * dz;
  }

  grad_view(groups_[4], grad).noalias() += dh * ws.u.transpose();
  grad_view(groups_[5], grad) += dh.rowwise().sum();
  const Matrix du = view(groups_[4]).transpose() * dh;

  auto g_tok = grad_view(groups_[0], grad);
  auto g_pos = grad_view(groups_[1], grad);
  Matrix dtau = Matrix::Zero(d, batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    const Token* x = states.data() + b * m;
    for (int i = 0; i < m; ++i) {
      const auto col = du.block(static_cast<Eigen::Index>(i) * d, b, d, 1);
      g_tok.col(x[i]) += col;
      g_pos.col(i) += col;
      dtau.col(b) += col;
    }
  }
  grad_view(groups_[2], grad).noalias() += dtau * ws.phi.transpose();
  grad_view(groups_[3], grad) += dtau.rowwise().sum();
}

template <typename Scalar>
std::vector<double> ScoreNetT<Scalar>::logits(
    std::span<const Token> states, std::span<const double> times) const {
  const int m = arch_.length;
  const int n = arch_.vocab;
  std::vector<double> out(times.size() * m * n);
  Workspace ws;
  for (std::size_t begin = 0; begin < times.size(); begin += kEvalChunk) {
    const std::size_t rows = std::min<std::size_t>(kEvalChunk, times.size() - begin);
    forward(states.subspan(begin * m, rows * m), times.subspan(begin, rows), ws);
    for (std::size_t r = 0; r < rows; ++r) {
      for (int k = 0; k < m * n; ++k) {
        out[(begin + r) * m * n + k] = static_cast<double>(ws.logits(k, r));
      }
    }
  }
  return out;
}

template <typename Scalar>
void ScoreNetT<Scalar>::score_ratios(std::span<const Token> states,
                                     std::span<const double> times,
                                     std::span<double> out) const {
  const int m = arch_.length;
  const int n = arch_.vocab;
  if (out.size() != times.size() * m * n) {
    throw InvalidInput("ScoreNet: output buffer size mismatch");
  }
  Workspace ws;
  for (std::size_t begin = 0; begin < times.size(); begin += kEvalChunk) {
    const std::size_t rows = std::min<std::size_t>(kEvalChunk, times.size() - begin);
    forward(states.subspan(begin * m, rows * m), times.subspan(begin, rows), ws);
    for (std::size_t r = 0; r < rows; ++r) {
      double* dst = out.data() + (begin + r) * m * n;
      if (arch_.parameterization == Parameterization::kRaw) {
        for (int k = 0; k < m * n; ++k) {
          dst[k] = std::exp(static_cast<double>(ws.logits(k, r)));
        }
      } else {
        const double c =
            unmask_kernel_ratio(schedule_.sigma_bar(times[begin + r]));
        for (int i = 0; i < m; ++i) {
          double peak = -std::numeric_limits<double>::infinity();
          for (int v = 0; v < n; ++v) {
            peak = std::max(peak, static_cast<double>(ws.logits(i * n + v, r)));
          }
          double total = 0.0;
          for (int v = 0; v < n; ++v) {
            dst[i * n + v] =
                std::exp(static_cast<double>(ws.logits(i * n + v, r)) - peak);
            total += dst[i * n + v];
          }
          for (int v = 0; v < n; ++v) dst[i * n + v] *= c / total;
        }
      }
      for (int k = 0; k < m * n; ++k) {
        if (!std::isfinite(dst[k])) {
          throw NumericFault("ScoreNet: non-finite score; parameters diverged");
        }
      }
    }
  }
}

template <typename Scalar>
double ScoreNetT<Scalar>::dse_loss(const DseBatch& batch, Vector* grad) const {
  const int m = arch_.length;
  const int n = arch_.vocab;
  const Token mask = static_cast<Token>(n);
  if (batch.rows < 1 || batch.times.size() != static_cast<std::size_t>(batch.rows) ||
      batch.clean.size() != static_cast<std::size_t>(batch.rows) * m ||
      batch.perturbed.size() != batch.clean.size()) {
    throw InvalidInput("dse_loss: malformed batch");
  }
  Workspace ws;
  forward(batch.perturbed, batch.times, ws);

  Matrix d_logits;
  if (grad) d_logits = Matrix::Zero(ws.logits.rows(), ws.logits.cols());
  double loss = 0.0;
  std::vector<double> logq(static_cast<std::size_t>(n));
  for (int b = 0; b < batch.rows; ++b) {
    const double t = batch.times[b];
    const double c = unmask_kernel_ratio(schedule_.sigma_bar(t));
    const double weight = schedule_.sigma(t) / batch.rows;
    const Token* x0 = batch.clean.data() + static_cast<std::size_t>(b) * m;
    const Token* xt = batch.perturbed.data() + static_cast<std::size_t>(b) * m;
    for (int i = 0; i < m; ++i) {
      if (xt[i] != mask) continue;
      if (x0[i] >= n) throw InvalidInput("dse_loss: clean sequence has MASK");
      double term = 0.0;
      if (arch_.parameterization == Parameterization::kRaw) {
        for (int v = 0; v < n; ++v) {
          const double z = static_cast<double>(ws.logits(i * n + v, b));
          const double s = std::exp(z);
          const double r = v == x0[i] ? c : 0.0;
          term += s - r * z + k_or_zero(r);
          if (grad) d_logits(i * n + v, b) = static_cast<Scalar>(weight * (s - r));
        }
      } else {
        double peak = -std::numeric_limits<double>::infinity();
        for (int v = 0; v < n; ++v) {
          peak = std::max(peak, static_cast<double>(ws.logits(i * n + v, b)));
        }
        double total = 0.0;
        for (int v = 0; v < n; ++v) {
          total += std::exp(static_cast<double>(ws.logits(i * n + v, b)) - peak);
        }
        const double lse = peak + std::log(total);
        const double log_c = std::log(c);
        for (int v = 0; v < n; ++v) {
          logq[v] = static_cast<double>(ws.logits(i * n + v, b)) - lse;
          const double s = c * std::exp(logq[v]);
          const double r = v == x0[i] ? c : 0.0;
          term += s - r * (log_c + logq[v]) + k_or_zero(r);
          if (grad) {
            d_logits(i * n + v, b) = static_cast<Scalar>(
                weight * (s - r));  // sum_n (s_n - r_n) = 0 here
          }
        }
      }
      loss += weight * term;
    }
  }
  if (!std::isfinite(loss)) throw NumericFault("dse_loss: non-finite loss");
  if (grad) {
    if (grad->size() != params_.size()) *grad = Vector::Zero(params_.size());
    else grad->setZero();
    backward(batch.perturbed, ws, d_logits, *grad);
  }
  return loss;
}

template <typename Scalar>
void ScoreNetT<Scalar>::check_finite() const {
  if (!params_.allFinite()) {
    throw NumericFault("ScoreNet: NaN/Inf in parameters");
  }
}

template <typename Scalar>
void ScoreNetT<Scalar>::tie_positions(int src, int dst) {
  const int m = arch_.length;
  if (src < 0 || src >= m || dst < 0 || dst >= m) {
    throw InvalidInput("tie_positions: position out of range");
  }
  const int d = arch_.embed_dim;
  const int n = arch_.vocab;
  auto pos = group_view("pos_emb");
  pos.col(dst) = pos.col(src);
  auto in_w = group_view("in_w");
  in_w.middleCols(static_cast<Eigen::Index>(dst) * d, d) =
      in_w.middleCols(static_cast<Eigen::Index>(src) * d, d).eval();
  auto out_w = group_view("out_w");
  out_w.middleRows(static_cast<Eigen::Index>(dst) * n, n) =
      out_w.middleRows(static_cast<Eigen::Index>(src) * n, n).eval();
  auto out_b = group_view("out_b");
  out_b.middleRows(static_cast<Eigen::Index>(dst) * n, n) =
      out_b.middleRows(static_cast<Eigen::Index>(src) * n, n).eval();
}

template <typename Scalar>
void ScoreNetT<Scalar>::save(const std::string& path) const {
  nlohmann::json header = arch_.to_json();
  header["format"] = "infosedd-checkpoint-v1";
  header["schedule"] = schedule_.to_json();
  header["dtype"] = sizeof(Scalar) == 4 ? "f32" : "f64";
  header["n_params"] = params_.size();
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write checkpoint " + path);
  out.write(kCheckpointMagic, 8);
  write_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  std::vector<unsigned char> block(params_.size() * sizeof(Scalar));
  for (Eigen::Index k = 0; k < params_.size(); ++k) {
    if constexpr (sizeof(Scalar) == 4) {
      const auto bits = std::bit_cast<std::uint32_t>(params_[k]);
      for (int i = 0; i < 4; ++i) block[4 * k + i] = static_cast<unsigned char>(bits >> (8 * i));
    } else {
      const auto bits = std::bit_cast<std::uint64_t>(params_[k]);
      for (int i = 0; i < 8; ++i) block[8 * k + i] = static_cast<unsigned char>(bits >> (8 * i));
    }
  }
  out.write(reinterpret_cast<const char*>(block.data()),
            static_cast<std::streamsize>(block.size()));
  if (!out) throw FormatError("failed writing checkpoint " + path);
}

template <typename Scalar>
ScoreNetT<Scalar> ScoreNetT<Scalar>::load(const std::string& path,
                                          int expected_length,
                                          int expected_vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path);
  const ParsedHeader parsed = parse_header(in, path);
  const nlohmann::json& h = parsed.json;
  if (!h.is_object() || h.value("format", "") != "infosedd-checkpoint-v1") {
    throw FormatError("checkpoint " + path + ": unknown format");
  }
  const NetArchitecture arch = NetArchitecture::from_json(h);
  if ((expected_length && arch.length != expected_length) ||
      (expected_vocab && arch.vocab != expected_vocab)) {
    throw ShapeMismatch("checkpoint " + path + " has (M, N) = (" +
                        std::to_string(arch.length) + ", " +
                        std::to_string(arch.vocab) + "), expected (" +
                        std::to_string(expected_length) + ", " +
                        std::to_string(expected_vocab) + ")");
  }
  const NoiseSchedule schedule = NoiseSchedule::from_json(h.at("schedule"));
  std::string dtype;
  std::uint64_t n_params = 0;
  try {
    dtype = h.at("dtype").get<std::string>();
    n_params = h.at("n_params").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("checkpoint " + path + ": " + e.what());
  }
  if (dtype != "f32" && dtype != "f64") {
    throw FormatError("checkpoint " + path + ": unknown dtype " + dtype);
  }
  ScoreNetT net(arch, schedule, 0);
  if (static_cast<std::uint64_t>(net.parameter_count()) != n_params) {
    throw FormatError("checkpoint " + path + ": parameter count disagrees with architecture");
  }
  const std::size_t width = dtype == "f32" ? 4 : 8;
  std::vector<unsigned char> block(n_params * width);
  in.read(reinterpret_cast<char*>(block.data()),
          static_cast<std::streamsize>(block.size()));
  if (static_cast<std::size_t>(in.gcount()) != block.size() ||
      in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("checkpoint " + path + ": parameter block size mismatch");
  }
  Vector params(static_cast<Eigen::Index>(n_params));
  for (std::uint64_t k = 0; k < n_params; ++k) {
    if (width == 4) {
      std::uint32_t bits = 0;
      for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(block[4 * k + i]) << (8 * i);
      params[k] = static_cast<Scalar>(std::bit_cast<float>(bits));
    } else {
      std::uint64_t bits = 0;
      for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(block[8 * k + i]) << (8 * i);
      params[k] = static_cast<Scalar>(std::bit_cast<double>(bits));
    }
  }
  net.params_ = std::move(params);
  return net;
}

nlohmann::json read_checkpoint_header(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path);
  return parse_header(in, path).json;
}

template class ScoreNetT<float>;
template class ScoreNetT<double>;

}  // namespace infosedd
