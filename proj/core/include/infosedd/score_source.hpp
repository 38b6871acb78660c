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

#include <span>
#include <vector>

#include "infosedd/tokens.hpp"

namespace infosedd {

/// Anything that yields unmasking score ratios s(x_t, t)[i][n] ~=
/// p_t(x_t with position i set to n) / p_t(x_t). Entries are meaningful only
/// at masked positions of x_t. Implementations must be deterministic and
/// safe to call concurrently.
class ScoreSource {
 public:
  virtual ~ScoreSource() = default;

  virtual int length() const = 0;
  virtual int vocab() const = 0;

  /// Batched evaluation. `states` holds `times.size()` rows of length()
  /// tokens; `out` receives rows x length() x vocab() ratios, last index
  /// fastest.
  virtual void score_ratios(std::span<const Token> states,
                            std::span<const double> times,
                            std::span<double> out) const = 0;

  /// Single-sequence convenience wrapper; returns length() x vocab() values.
  std::vector<double> score_ratios(const TokenSeq& x, double t) const {
    if (x.length() != length() || x.vocab() != vocab()) {
      throw InvalidInput("ScoreSource: sequence shape mismatch");
    }
    std::vector<double> out(static_cast<std::size_t>(length()) * vocab());
    const double times[1] = {t};
    score_ratios(x.tokens(), times, out);
    return out;
  }
};

}  // namespace infosedd
