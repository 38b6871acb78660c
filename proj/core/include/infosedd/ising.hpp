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
#include <string>
#include <vector>

#include "infosedd/dataset.hpp"
#include "infosedd/estimators.hpp"
#include "infosedd/rng.hpp"
#include "infosedd/score_net.hpp"
#include "infosedd/trainer.hpp"

namespace infosedd {

/// Zero-field square-lattice Ising model with periodic boundaries.
struct IsingSystem {
  int L = 10;
  double J = 1.0;
  double k_b = 1.0;
  double T = 2.0;

  double beta() const { return 1.0 / (k_b * T); }
  void validate() const;
};

/// L x L spins in {-1, +1}, row-major.
class SpinConfig {
 public:
  explicit SpinConfig(int L, std::vector<std::int8_t> spins);
  static SpinConfig all_up(int L);
  static SpinConfig checkerboard(int L);
  static SpinConfig random(int L, Rng& rng);

  int side() const { return L_; }
  int sites() const { return L_ * L_; }
  int at(int site) const { return spins_[site]; }
  int at(int row, int col) const { return spins_[row * L_ + col]; }
  void flip(int site) { spins_[site] = static_cast<std::int8_t>(-spins_[site]); }
  /// Sum of spins divided by L^2.
  double magnetization() const;
  /// -1 -> 0, +1 -> 1.
  std::vector<Token> tokens() const;
  const std::vector<std::int8_t>& spins() const { return spins_; }

 private:
  int L_;
  std::vector<std::int8_t> spins_;
};

/// E = -J sum over the 2 L^2 nearest-neighbour edges of s_i s_j. For L = 2
/// the two edges joining a pair of sites (direct and wrapped) both count.
double energy(const IsingSystem& sys, const SpinConfig& cfg);
/// Energy change from flipping `site`: 2 J s_i sum of its four neighbours.
double delta_energy(const IsingSystem& sys, const SpinConfig& cfg, int site);

/// Single-site Metropolis chain; proposals pick a uniformly random site.
class MetropolisChain {
 public:
  MetropolisChain(const IsingSystem& sys, SpinConfig init, Rng rng);
  /// L^2 proposals.
  void sweep();
  const SpinConfig& state() const { return state_; }
  std::uint64_t accepted() const { return accepted_; }

 private:
  IsingSystem sys_;
  SpinConfig state_;
  Rng rng_;
  double accept_[5];  // min(1, exp(-beta dE)) indexed by neighbour sum
  std::uint64_t accepted_ = 0;
};

struct MetropolisConfig {
  int burn_in_sweeps = 1000;
  std::size_t n_samples = 10000;
  int sweeps_between = 10;
  bool start_all_up = false;
};

/// Samples as a dataset with M = L^2, N = 2.
Dataset metropolis_sample(const IsingSystem& sys, const MetropolisConfig& config,
                          std::uint64_t seed);

/// Boltzmann probabilities of all 2^(L^2) configurations, indexed by the
/// token encoding read as a binary number (site 0 most significant).
/// Requires L^2 <= 20.
std::vector<double> exact_boltzmann(const IsingSystem& sys);

/// ln lambda of the infinite-lattice partition function per site,
///   ln 2 + 1/(2 pi^2) int_0^pi int_0^pi
///        ln(cosh^2(2 beta J) - sinh(2 beta J)(cos a + cos b)) da db,
/// by tensor Gauss-Legendre quadrature.
double onsager_log_lambda(double T, double J = 1.0, double k_b = 1.0,
                          int nodes = 256);
/// F = -k_b T ln lambda.
double onsager_free_energy(double T, double J = 1.0, double k_b = 1.0,
                           int nodes = 256);
/// H = -dF/dT by central difference, in nats per site.
double onsager_entropy_per_site(double T, double delta_T = 1e-4, double J = 1.0,
                                double k_b = 1.0, int nodes = 256);

struct IsingExperimentConfig {
  int L = 10;
  double J = 1.0;
  std::vector<double> temperatures{2.0, 3.5};
  MetropolisConfig sampler;
  NetArchitecture arch;  // length and vocab are overwritten
  NoiseSchedule schedule = NoiseSchedule::geometric();
  TrainConfig train;
  EstimatorConfig estimator;
  std::uint64_t seed = 0;
};

struct IsingRow {
  double T;
  double h_estimated;  // per site
  double h_stderr;     // per site
  double h_analytic;   // per site
};

/// For each temperature (ascending): sample, train, estimate entropy,
/// divide by L^2.
std::vector<IsingRow> run_ising_experiment(const IsingExperimentConfig& config);
void write_ising_csv(const std::vector<IsingRow>& rows, const std::string& path);

}  // namespace infosedd
