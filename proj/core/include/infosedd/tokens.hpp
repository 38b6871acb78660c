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

#include "infosedd/error.hpp"

namespace infosedd {

using Token = std::uint16_t;

/// Largest supported per-token vocabulary; MASK is encoded as `vocab`, so
/// vocab + 1 must fit a Token.
inline constexpr int kMaxVocab = 65534;

/// A length-M sequence over {0..N-1} plus the absorbing token MASK = N.
class TokenSeq {
 public:
  TokenSeq(std::vector<Token> tokens, int vocab)
      : tokens_(std::move(tokens)), vocab_(vocab) {
    if (vocab_ < 1 || vocab_ > kMaxVocab) {
      throw InvalidInput("TokenSeq: vocab must be in [1, 65534]");
    }
    if (tokens_.empty()) throw InvalidInput("TokenSeq: length must be >= 1");
    for (Token tok : tokens_) {
      if (tok > vocab_) {
        throw InvalidInput("TokenSeq: token " + std::to_string(tok) +
                           " outside [0, " + std::to_string(vocab_) + "]");
      }
    }
  }

  static TokenSeq all_masked(int length, int vocab) {
    return TokenSeq(std::vector<Token>(static_cast<std::size_t>(length),
                                       static_cast<Token>(vocab)),
                    vocab);
  }

  int length() const { return static_cast<int>(tokens_.size()); }
  int vocab() const { return vocab_; }
  Token mask() const { return static_cast<Token>(vocab_); }
  bool is_masked(int i) const { return tokens_[i] == mask(); }
  int masked_count() const {
    int count = 0;
    for (Token tok : tokens_) count += tok == mask();
    return count;
  }

  Token operator[](int i) const { return tokens_[i]; }
  void set(int i, Token value) {
    if (value > vocab_) throw InvalidInput("TokenSeq::set: token out of range");
    tokens_[i] = value;
  }

  std::span<const Token> tokens() const { return tokens_; }

  bool operator==(const TokenSeq&) const = default;

 private:
  std::vector<Token> tokens_;
  int vocab_;
};

}  // namespace infosedd
