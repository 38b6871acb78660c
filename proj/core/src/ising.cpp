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

#include "infosedd/ising.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "infosedd/error.hpp"
#include "infosedd/quadrature.hpp"

namespace infosedd {

void IsingSystem::validate() const {
  if (L < 2) throw InvalidInput("Ising: L must be >= 2");
  if (!(T > 0.0)) throw InvalidInput("Ising: T must be > 0");
  if (!(k_b > 0.0)) throw InvalidInput("Ising: k_b must be > 0");
}

SpinConfig::SpinConfig(int L, std::vector<std::int8_t> spins)
    : L_(L), spins_(std::move(spins)) {
  if (L < 2 || spins_.size() != static_cast<std::size_t>(L) * L) {
    throw InvalidInput("SpinConfig: need L >= 2 and L^2 spins");
  }
  for (auto s : spins_) {
    if (s != 1 && s != -1) throw InvalidInput("SpinConfig: spins must be -1 or +1");
  }
}

SpinConfig SpinConfig::all_up(int L) {
  return SpinConfig(L, std::vector<std::int8_t>(static_cast<std::size_t>(L) * L, 1));
}

SpinConfig SpinConfig::checkerboard(int L) {
  std::vector<std::int8_t> s(static_cast<std::size_t>(L) * L);
  for (int r = 0; r < L; ++r) {
    for (int c = 0; c < L; ++c) s[r * L + c] = ((r + c) % 2 == 0) ? 1 : -1;
  }
  return SpinConfig(L, std::move(s));
}

SpinConfig SpinConfig::random(int L, Rng& rng) {
  std::vector<std::int8_t> s(static_cast<std::size_t>(L) * L);
  for (auto& v : s) v = rng.bernoulli(0.5) ? 1 : -1;
  return SpinConfig(L, std::move(s));
}

double SpinConfig::magnetization() const {
  long sum = 0;
  for (auto s : spins_) sum += s;
  return static_cast<double>(sum) / sites();
}

std::vector<Token> SpinConfig::tokens() const {
  std::vector<Token> out(spins_.size());
  for (std::size_t i = 0; i < spins_.size(); ++i) out[i] = spins_[i] > 0 ? 1 : 0;
  return out;
}

namespace {

int neighbour_sum(const SpinConfig& cfg, int site) {
  const int L = cfg.side();
  const int r = site / L;
  const int c = site % L;
  return cfg.at((r + 1) % L, c) + cfg.at((r + L - 1) % L, c) +
         cfg.at(r, (c + 1) % L) + cfg.at(r, (c + L - 1) % L);
}

}  // namespace

double energy(const IsingSystem& sys, const SpinConfig& cfg) {
  const int L = cfg.side();
  long sum = 0;
  for (int r = 0; r < L; ++r) {
    for (int c = 0; c < L; ++c) {
      const int s = cfg.at(r, c);
      sum += s * cfg.at(r, (c + 1) % L);  // right edge
      sum += s * cfg.at((r + 1) % L, c);  // down edge
    }
  }
  return -sys.J * static_cast<double>(sum);
}

double delta_energy(const IsingSystem& sys, const SpinConfig& cfg, int site) {
  if (site < 0 || site >= cfg.sites()) throw InvalidInput("delta_energy: bad site");
  return 2.0 * sys.J * cfg.at(site) * neighbour_sum(cfg, site);
}

MetropolisChain::MetropolisChain(const IsingSystem& sys, SpinConfig init, Rng rng)
    : sys_(sys), state_(std::move(init)), rng_(std::move(rng)) {
  sys_.validate();
  if (state_.side() != sys_.L) throw InvalidInput("MetropolisChain: lattice size mismatch");
  for (int k = 0; k < 5; ++k) {
    const double dE = 2.0 * sys_.J * (2 * k - 4);
    accept_[k] = std::min(1.0, std::exp(-sys_.beta() * dE));
  }
}

void MetropolisChain::sweep() {
  const int n = state_.sites();
  for (int k = 0; k < n; ++k) {
    const int site = static_cast<int>(rng_.below(n));
    const int local = state_.at(site) * neighbour_sum(state_, site);
    const double a = accept_[(local + 4) / 2];
    if (a >= 1.0 || rng_.uniform() < a) {
      state_.flip(site);
      ++accepted_;
    }
  }
}

Dataset metropolis_sample(const IsingSystem& sys, const MetropolisConfig& config,
                          std::uint64_t seed) {
  sys.validate();
  if (config.burn_in_sweeps < 1 || config.n_samples < 1 || config.sweeps_between < 1) {
    throw InvalidInput("metropolis_sample: budgets must be >= 1");
  }
  Rng init_rng = Rng::stream(seed, 0);
  SpinConfig init = config.start_all_up ? SpinConfig::all_up(sys.L)
                                        : SpinConfig::random(sys.L, init_rng);
  MetropolisChain chain(sys, std::move(init), Rng::stream(seed, 1));
  for (int s = 0; s < config.burn_in_sweeps; ++s) chain.sweep();
  Dataset data(sys.L * sys.L, 2);
  data.reserve(config.n_samples);
  for (std::size_t k = 0; k < config.n_samples; ++k) {
    for (int s = 0; s < config.sweeps_between; ++s) chain.sweep();
    data.append(chain.state().tokens());
  }
  data.meta()["seed"] = seed;
  data.meta()["ising"] = {{"L", sys.L}, {"J", sys.J}, {"k_b", sys.k_b}, {"T", sys.T}};
  return data;
}

std::vector<double> exact_boltzmann(const IsingSystem& sys) {
  sys.validate();
  const int n = sys.L * sys.L;
  if (n > 20) throw ScaleBoundExceeded("exact_boltzmann: L^2 must be <= 20");
  const std::uint64_t states = std::uint64_t{1} << n;
  std::vector<double> energies(states);
  std::vector<std::int8_t> spins(n);
  double e_min = std::numeric_limits<double>::infinity();
  for (std::uint64_t idx = 0; idx < states; ++idx) {
    for (int i = 0; i < n; ++i) spins[i] = ((idx >> (n - 1 - i)) & 1) ? 1 : -1;
    energies[idx] = energy(sys, SpinConfig(sys.L, spins));
    e_min = std::min(e_min, energies[idx]);
  }
  std::vector<double> probs(states);
  double z = 0.0;
  for (std::uint64_t idx = 0; idx < states; ++idx) {
    probs[idx] = std::exp(-sys.beta() * (energies[idx] - e_min));
    z += probs[idx];
  }
  for (double& p : probs) p /= z;
  return probs;
}

double onsager_log_lambda(double T, double J, double k_b, int nodes) {
  if (!(T > 0.0)) throw DomainError("onsager: T must be > 0");
  if (nodes < 1) throw InvalidInput("onsager: nodes must be >= 1");
  const double k = 2.0 * J / (k_b * T);
  const double ch = std::cosh(k);
  const double sh = std::sinh(k);
  const QuadratureRule rule = gauss_legendre(nodes, 0.0, std::numbers::pi);
  std::vector<double> cosines(rule.nodes.size());
  for (std::size_t i = 0; i < cosines.size(); ++i) cosines[i] = std::cos(rule.nodes[i]);
  double integral = 0.0;
  for (std::size_t i = 0; i < cosines.size(); ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < cosines.size(); ++j) {
      inner += rule.weights[j] * std::log(ch * ch - sh * (cosines[i] + cosines[j]));
    }
    integral += rule.weights[i] * inner;
  }
  return std::numbers::ln2 + integral / (2.0 * std::numbers::pi * std::numbers::pi);
}

double onsager_free_energy(double T, double J, double k_b, int nodes) {
  return -k_b * T * onsager_log_lambda(T, J, k_b, nodes);
}

double onsager_entropy_per_site(double T, double delta_T, double J, double k_b,
                                int nodes) {
  if (!(delta_T > 0.0) || !(T - delta_T > 0.0)) {
    throw DomainError("onsager: need 0 < delta_T < T");
  }
  return (onsager_free_energy(T - delta_T, J, k_b, nodes) -
          onsager_free_energy(T + delta_T, J, k_b, nodes)) /
         (2.0 * delta_T);
}

std::vector<IsingRow> run_ising_experiment(const IsingExperimentConfig& config) {
  if (config.temperatures.empty()) throw InvalidInput("ising: empty temperature grid");
  std::vector<double> temps = config.temperatures;
  std::sort(temps.begin(), temps.end());
  const int sites = config.L * config.L;
  std::vector<IsingRow> rows;
  for (std::size_t k = 0; k < temps.size(); ++k) {
    IsingSystem sys{config.L, config.J, 1.0, temps[k]};
    const std::uint64_t base = config.seed * 1000003u + k;
    const Dataset data = metropolis_sample(sys, config.sampler, Rng::stream(base, 0).bits());
    NetArchitecture arch = config.arch;
    arch.length = sites;
    arch.vocab = 2;
    ScoreNet net(arch, config.schedule, Rng::stream(base, 1).bits());
    TrainConfig tc = config.train;
    tc.seed = Rng::stream(base, 2).bits();
    train(net, data, tc);
    const DatasetSampler sampler(data);
    EstimatorConfig ec = config.estimator;
    ec.seed = Rng::stream(base, 3).bits();
    const EstimateReport report = estimate_entropy(
        net, [&](Rng& rng, std::span<Token> out) { sampler(rng, out); },
        config.schedule, ec);
    rows.push_back({temps[k], report.estimate / sites, report.stderr_ / sites,
                    onsager_entropy_per_site(temps[k])});
  }
  return rows;
}

void write_ising_csv(const std::vector<IsingRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out.precision(10);
  out << "T,H_est,H_stderr,H_analytic\n";
  for (const auto& r : rows) {
    out << r.T << ',' << r.h_estimated << ',' << r.h_stderr << ',' << r.h_analytic << '\n';
  }
}

}  // namespace infosedd
