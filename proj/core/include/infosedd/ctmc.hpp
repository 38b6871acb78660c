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

#include "infosedd/rng.hpp"
#include "infosedd/schedule.hpp"
#include "infosedd/tokens.hpp"

namespace infosedd {

/// Draws x_t ~ p_t(. | x0) under the absorbing process: each token is kept
/// with probability exp(-sigma_bar(t)) and replaced by MASK otherwise.
/// InvalidInput if x0 already contains MASK.
TokenSeq perturb(const TokenSeq& x0, const NoiseSchedule& schedule, double t,
                 Rng& rng);

/// Same kernel applied to a sequence that may already be partially masked;
/// masked positions stay masked.
TokenSeq perturb_partial(const TokenSeq& x, const NoiseSchedule& schedule,
                         double t, Rng& rng);

/// Raw form used by batch loops. Writes the perturbed copy of `x0` into
/// `out` (same length) and returns the number of masked positions. MASK
/// entries of x0 are passed through.
int perturb_tokens(std::span<const Token> x0, Token mask, double keep_prob,
                   Rng& rng, std::span<Token> out);

}  // namespace infosedd
