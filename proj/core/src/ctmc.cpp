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

#include "infosedd/ctmc.hpp"

#include <vector>

namespace infosedd {

int perturb_tokens(std::span<const Token> x0, Token mask, double keep_prob,
                   Rng& rng, std::span<Token> out) {
  int masked = 0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (x0[i] == mask || rng.uniform() >= keep_prob) {
      out[i] = mask;
      ++masked;
    } else {
      out[i] = x0[i];
    }
  }
  return masked;
}

TokenSeq perturb_partial(const TokenSeq& x, const NoiseSchedule& schedule,
                         double t, Rng& rng) {
  const double keep = token_kernel(schedule, t).keep_prob;
  std::vector<Token> out(static_cast<std::size_t>(x.length()));
  perturb_tokens(x.tokens(), x.mask(), keep, rng, out);
  return TokenSeq(std::move(out), x.vocab());
}

TokenSeq perturb(const TokenSeq& x0, const NoiseSchedule& schedule, double t,
                 Rng& rng) {
  if (x0.masked_count() != 0) {
    throw InvalidInput("perturb: x0 must not contain MASK tokens");
  }
  return perturb_partial(x0, schedule, t, rng);
}

}  // namespace infosedd
