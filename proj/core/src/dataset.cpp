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

#include "infosedd/dataset.hpp"

#include <fstream>

#include "infosedd/error.hpp"

namespace infosedd {

namespace {
constexpr const char* kDatasetFormat = "infosedd-dataset-v1";
}

Dataset::Dataset(int length, int vocab, std::optional<int> block_split)
    : length_(length), vocab_(vocab), block_split_(block_split) {
  if (length < 1) throw InvalidInput("Dataset: length must be >= 1");
  if (vocab < 1 || vocab > kMaxVocab) {
    throw InvalidInput("Dataset: vocab must be in [1, 65534]");
  }
  if (block_split && (*block_split < 1 || *block_split >= length)) {
    throw InvalidInput("Dataset: block_split must lie in [1, M)");
  }
}

void Dataset::append(std::span<const Token> row) {
  if (static_cast<int>(row.size()) != length_) {
    throw InvalidInput("Dataset::append: row length mismatch");
  }
  for (Token tok : row) {
    if (tok >= vocab_) throw InvalidInput("Dataset::append: token >= N");
  }
  tokens_.insert(tokens_.end(), row.begin(), row.end());
}

std::optional<double> Dataset::ground_truth_mi() const {
  if (meta_.contains("ground_truth_mi") && meta_["ground_truth_mi"].is_number()) {
    return meta_["ground_truth_mi"].get<double>();
  }
  return std::nullopt;
}

std::optional<double> Dataset::ground_truth_entropy() const {
  if (meta_.contains("ground_truth_entropy") &&
      meta_["ground_truth_entropy"].is_number()) {
    return meta_["ground_truth_entropy"].get<double>();
  }
  return std::nullopt;
}

Dataset Dataset::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > rows()) throw InvalidInput("Dataset::slice: range");
  Dataset out(length_, vocab_, block_split_);
  out.meta_ = meta_;
  out.tokens_.assign(tokens_.begin() + begin * length_,
                     tokens_.begin() + end * length_);
  return out;
}

nlohmann::json Dataset::header() const {
  nlohmann::json h = meta_;
  h["format"] = kDatasetFormat;
  h["M"] = length_;
  h["N"] = vocab_;
  h["block_split"] = block_split_ ? nlohmann::json(*block_split_)
                                  : nlohmann::json(nullptr);
  h["n_rows"] = rows();
  return h;
}

void Dataset::save(const std::string& path) const {
  std::ofstream bin(path, std::ios::binary);
  if (!bin) throw FormatError("cannot write dataset " + path);
  std::vector<unsigned char> bytes(tokens_.size() * 2);
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    bytes[2 * i] = static_cast<unsigned char>(tokens_[i] & 0xff);
    bytes[2 * i + 1] = static_cast<unsigned char>(tokens_[i] >> 8);
  }
  bin.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  std::ofstream js(path + ".json");
  if (!js) throw FormatError("cannot write dataset header " + path + ".json");
  js << header().dump(2) << '\n';
}

Dataset Dataset::load(const std::string& path) {
  std::ifstream js(path + ".json");
  if (!js) throw FormatError("missing dataset header " + path + ".json");
  nlohmann::json h;
  try {
    js >> h;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("dataset header " + path + ".json: " + e.what());
  }
  if (h.value("format", "") != kDatasetFormat) {
    throw FormatError("dataset header " + path + ".json: unknown format");
  }
  std::optional<int> split;
  std::size_t n_rows = 0;
  int length = 0;
  int vocab = 0;
  try {
    if (!h.at("block_split").is_null()) split = h.at("block_split").get<int>();
    n_rows = h.at("n_rows").get<std::size_t>();
    length = h.at("M").get<int>();
    vocab = h.at("N").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("dataset header " + path + ".json: " + e.what());
  }
  Dataset data(length, vocab, split);
  nlohmann::json meta = h;
  for (const char* key : {"format", "M", "N", "block_split", "n_rows"}) {
    meta.erase(key);
  }
  data.meta_ = std::move(meta);

  std::ifstream bin(path, std::ios::binary);
  if (!bin) throw FormatError("cannot open dataset " + path);
  const std::size_t n_tokens = n_rows * static_cast<std::size_t>(length);
  std::vector<unsigned char> bytes(n_tokens * 2);
  bin.read(reinterpret_cast<char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(bin.gcount()) != bytes.size() ||
      bin.peek() != std::char_traits<char>::eof()) {
    throw FormatError("dataset " + path + ": row block size disagrees with header");
  }
  data.tokens_.resize(n_tokens);
  for (std::size_t i = 0; i < n_tokens; ++i) {
    const Token tok = static_cast<Token>(bytes[2 * i] | (bytes[2 * i + 1] << 8));
    if (tok >= vocab) throw FormatError("dataset " + path + ": token >= N");
    data.tokens_[i] = tok;
  }
  return data;
}

void Dataset::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  for (int i = 0; i < length_; ++i) {
    out << (i ? "," : "") << "x" << i;
  }
  out << '\n';
  for (std::size_t r = 0; r < rows(); ++r) {
    const auto x = row(r);
    for (int i = 0; i < length_; ++i) out << (i ? "," : "") << x[i];
    out << '\n';
  }
}

}  // namespace infosedd
