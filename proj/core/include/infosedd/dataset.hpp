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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "infosedd/rng.hpp"
#include "infosedd/tokens.hpp"

namespace infosedd {

/// i.i.d. rows of M tokens over {0..N-1}.
///
/// On disk: `<path>` holds the row block (one little-endian uint16 per
/// token, row-major) and `<path>.json` the header with shape, split, seed
/// and whatever ground truth the generator knew.
class Dataset {
 public:
  Dataset(int length, int vocab, std::optional<int> block_split = std::nullopt);

  int length() const { return length_; }
  int vocab() const { return vocab_; }
  const std::optional<int>& block_split() const { return block_split_; }
  std::size_t rows() const { return tokens_.size() / length_; }
  bool empty() const { return tokens_.empty(); }

  std::span<const Token> row(std::size_t r) const {
    return std::span<const Token>(tokens_).subspan(r * length_, length_);
  }
  std::span<const Token> tokens() const { return tokens_; }

  void append(std::span<const Token> row);
  void reserve(std::size_t rows) { tokens_.reserve(rows * length_); }

  /// Free-form metadata: ground_truth_mi, ground_truth_entropy, seed, ...
  nlohmann::json& meta() { return meta_; }
  const nlohmann::json& meta() const { return meta_; }
  std::optional<double> ground_truth_mi() const;
  std::optional<double> ground_truth_entropy() const;

  /// Rows [begin, end) as a new dataset with the same header.
  Dataset slice(std::size_t begin, std::size_t end) const;

  void save(const std::string& path) const;
  static Dataset load(const std::string& path);
  void write_csv(const std::string& path) const;

  nlohmann::json header() const;

 private:
  int length_;
  int vocab_;
  std::optional<int> block_split_;
  std::vector<Token> tokens_;
  nlohmann::json meta_ = nlohmann::json::object();
};

/// Samples uniformly (with replacement) from the rows of a dataset.
class DatasetSampler {
 public:
  explicit DatasetSampler(const Dataset& data) : data_(&data) {}
  void operator()(Rng& rng, std::span<Token> out) const {
    const auto r = data_->row(rng.below(data_->rows()));
    std::copy(r.begin(), r.end(), out.begin());
  }

 private:
  const Dataset* data_;
};

}  // namespace infosedd
