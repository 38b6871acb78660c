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
#include <ostream>
#include <string>
#include <vector>

#include "infosedd/score_net.hpp"

namespace infosedd {

struct GradientCheck {
  double max_rel_error = 0.0;
  std::string worst_group;
  int checked = 0;
};

/// Central finite differences of dse_loss against the analytic gradient,
/// over up to `per_group` entries of every parameter group. The relative
/// error of an entry is |a - f| / max(|a|, |f|, 1e-6).
GradientCheck gradient_check(const ScoreNet64& net, const DseBatch& batch,
                             int per_group = 64, double step = 1e-5,
                             std::uint64_t seed = 0);

struct SelftestOptions {
  std::uint64_t seed = 0;
  /// Replaces the divergence term with one whose K has the wrong sign.
  /// Test fixture for checking that the suite notices.
  bool corrupt_k_term = false;
};

struct SuiteResult {
  std::string name;
  int passed = 0;
  int total = 0;
  std::vector<std::string> failures;
  bool ok() const { return passed == total; }
};

struct SelftestReport {
  std::vector<SuiteResult> suites;
  bool ok() const;
  void print(std::ostream& out) const;
};

SelftestReport run_selftest(const SelftestOptions& options = {});

}  // namespace infosedd
