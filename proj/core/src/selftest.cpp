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

#include "infosedd/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>

#include "infosedd/ctmc.hpp"
#include "infosedd/estimators.hpp"
#include "infosedd/exact.hpp"
#include "infosedd/ising.hpp"
#include "infosedd/synth.hpp"
#include "infosedd/trainer.hpp"

namespace infosedd {

GradientCheck gradient_check(const ScoreNet64& net, const DseBatch& batch,
                             int per_group, double step, std::uint64_t seed) {
  ScoreNet64 probe = net;
  ScoreNet64::Vector analytic;
  probe.dse_loss(batch, &analytic);
  Rng rng(seed);
  GradientCheck result;
  for (const auto& g : probe.groups()) {
    std::vector<Eigen::Index> entries;
    if (g.size() <= per_group) {
      for (Eigen::Index k = 0; k < g.size(); ++k) entries.push_back(g.offset + k);
    } else {
      for (int k = 0; k < per_group; ++k) {
        entries.push_back(g.offset + static_cast<Eigen::Index>(rng.below(g.size())));
      }
    }
    for (Eigen::Index k : entries) {
      double& w = probe.parameters()[k];
      const double saved = w;
      w = saved + step;
      const double up = probe.dse_loss(batch, nullptr);
      w = saved - step;
      const double down = probe.dse_loss(batch, nullptr);
      w = saved;
      const double fd = (up - down) / (2.0 * step);
      const double a = analytic[k];
      const double rel = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-6});
      ++result.checked;
      if (rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst_group = g.name;
      }
    }
  }
  return result;
}

bool SelftestReport::ok() const {
  for (const auto& s : suites) {
    if (!s.ok()) return false;
  }
  return true;
}

void SelftestReport::print(std::ostream& out) const {
  int good = 0;
  for (const auto& s : suites) {
    out << std::left << std::setw(26) << s.name << std::right << std::setw(6)
        << s.passed << '/' << s.total << (s.ok() ? "  pass" : "  FAIL") << '\n';
    for (const auto& f : s.failures) out << "    " << f << '\n';
    good += s.ok();
  }
  out << "selftest: " << good << '/' << suites.size() << " suites passed\n";
}

namespace {

class Suite {
 public:
  explicit Suite(std::string name) { result_.name = std::move(name); }
  void check(bool ok, const std::string& what) {
    ++result_.total;
    if (ok) {
      ++result_.passed;
    } else if (result_.failures.size() < 8) {
      result_.failures.push_back(what);
    }
  }
  SuiteResult done() { return std::move(result_); }

 private:
  SuiteResult result_;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

SuiteResult kernel_normalization() {
  Suite s("kernel_normalization");
  const NoiseSchedule sched = NoiseSchedule::geometric();
  double previous = -1.0;
  for (int k = 0; k < 100; ++k) {
    const double t = sched.horizon() * k / 99.0;
    const TokenKernel kern = token_kernel(sched, t);
    s.check(std::abs(kern.keep_prob + kern.absorb_prob - 1.0) <=
                std::numeric_limits<double>::epsilon(),
            fmt("keep + absorb != 1 at t = %g", t));
    s.check(kern.absorb_prob > previous, fmt("absorption not increasing at t = %g", t));
    previous = kern.absorb_prob;
  }
  s.check(sched.is_near_absorbing(), "terminal absorption below 0.999");
  s.check(k_term(1.0) == -1.0, "K(1) != -1");
  s.check(std::abs(k_term(std::exp(1.0))) < 1e-15, "K(e) != 0");
  Rng rng(7);
  for (int k = 0; k < 100; ++k) {
    const double a = std::exp(rng.uniform(-5.0, 5.0));
    const double b = std::exp(rng.uniform(-5.0, 5.0));
    s.check(k_term(0.5 * (a + b)) <= 0.5 * (k_term(a) + k_term(b)) + 1e-12,
            fmt("K not convex at (%g, %g)", a, b));
  }
  return s.done();
}

SuiteResult marginal_score_identity(std::uint64_t seed) {
  Suite s("marginal_score_identity");
  const NoiseSchedule sched = NoiseSchedule::geometric();
  Rng rng(seed);
  const double times[] = {0.05, 0.4, 0.9};
  for (int m = 2; m <= 6; ++m) {
    const int b = 1 + static_cast<int>(rng.below(m - 1));
    const ExactPMF joint = random_pmf(m, 2, b, rng);
    const ExactPMF mx = marginal_x(joint);
    const ExactPMF my = marginal_y(joint);
    // Odometer over {0, 1, MASK}^len for the unmasked-side block.
    for (int side = 0; side < 2; ++side) {
      const int lo = side == 0 ? 0 : b;
      const int len = side == 0 ? b : m - b;
      const ExactPMF& marg = side == 0 ? mx : my;
      std::vector<Token> block(len, 0);
      while (true) {
        std::vector<Token> full(m, 2);
        for (int i = 0; i < len; ++i) full[lo + i] = block[i];
        const TokenSeq xt(full, 2);
        const TokenSeq xb(block, 2);
        for (int i = 0; i < len; ++i) {
          if (block[i] != 2) continue;
          for (Token n = 0; n < 2; ++n) {
            for (double t : times) {
              const double joint_ratio = exact_score_ratio(joint, sched, t, xt, lo + i, n);
              const double marg_ratio = exact_score_ratio(marg, sched, t, xb, i, n);
              s.check(std::abs(joint_ratio - marg_ratio) <=
                          1e-10 * std::max(1.0, std::abs(marg_ratio)),
                      fmt("M = %g: joint %.17g vs marginal %.17g", m, joint_ratio,
                          marg_ratio));
            }
          }
        }
        int k = len - 1;
        while (k >= 0 && block[k] == 2) block[k--] = 0;
        if (k < 0) break;
        ++block[k];
      }
    }
  }
  return s.done();
}

double corrupted_term(double sp, double sq) {
  // K with its sign flipped.
  const double k = sp > 0.0 ? sp * (std::log(sp) - 1.0) : 0.0;
  return -k + sq - (sp > 0.0 ? sp * std::log(sq) : 0.0);
}

SuiteResult oracle_mi(std::uint64_t seed, bool corrupt) {
  Suite s("oracle_mi");
  const NoiseSchedule sched = NoiseSchedule::geometric();
  Rng rng(seed);
  for (int k = 0; k < 5; ++k) {
    const int n = 2 + static_cast<int>(rng.below(2));
    const int m = 2 + static_cast<int>(rng.below(2));
    const int b = 1 + static_cast<int>(rng.below(m - 1));
    const ExactPMF joint = random_pmf(m, n, b, rng);
    const ExactScoreSource source(joint, sched);
    const PmfSampler sampler(joint);
    EstimatorConfig cfg;
    cfg.n_samples = 100000;
    cfg.seed = seed + k;
    const SampleFn draw = [&](Rng& r, std::span<Token> out) { sampler.sample(r, out); };
    const EstimateReport rep =
        corrupt ? detail::estimate_mi(source, b, draw, sched, cfg, corrupted_term)
                : estimate_mi(source, b, draw, sched, cfg);
    const double truth = exact_mi(joint);
    const double tol = std::max(3.0 * rep.stderr_, 5e-3);
    s.check(std::abs(rep.estimate - truth) <= tol,
            fmt("estimate %.5f vs exact %.5f (tol %.5f)", rep.estimate, truth, tol));
  }
  return s.done();
}

SuiteResult gradient_suite(std::uint64_t seed) {
  Suite s("gradient_check");
  const NoiseSchedule sched = NoiseSchedule::geometric();
  Rng rng(seed);
  for (auto param : {Parameterization::kRaw, Parameterization::kConditional}) {
    NetArchitecture arch;
    arch.length = 3;
    arch.vocab = 3;
    arch.embed_dim = 4;
    arch.width = 8;
    arch.depth = 2;
    arch.time_features = 2;
    arch.parameterization = param;
    ScoreNet64 net(arch, sched, seed);
    for (Eigen::Index k = 0; k < net.parameter_count(); ++k) {
      net.parameters()[k] += 0.1 * rng.normal();
    }
    Dataset data(arch.length, arch.vocab);
    for (int r = 0; r < 32; ++r) {
      std::vector<Token> row(arch.length);
      for (auto& tok : row) tok = static_cast<Token>(rng.below(arch.vocab));
      data.append(row);
    }
    const DseBatch batch = make_batch(data, sched, 16, true, rng);
    const GradientCheck gc = gradient_check(net, batch, 64, 1e-5, seed);
    s.check(gc.max_rel_error < 1e-4,
            fmt("max relative error %.3g", gc.max_rel_error) + " in " + gc.worst_group);
  }
  return s.done();
}

SuiteResult cantor_bijection() {
  Suite s("cantor_bijection");
  int bad = 0;
  for (std::uint64_t x = 0; x < 100; ++x) {
    for (std::uint64_t y = 0; y < 100; ++y) {
      const CantorPair back = cantor_unpair(cantor_pair(x, y));
      bad += back.x != x || back.y != y;
    }
  }
  s.check(bad == 0, fmt("%g round trips failed", bad));
  int bad_z = 0;
  for (std::uint64_t z = 0; z < 10000; ++z) {
    const CantorPair p = cantor_unpair(z);
    bad_z += cantor_pair(p.x, p.y) != z;
  }
  s.check(bad_z == 0, fmt("%g inverse round trips failed", bad_z));
  s.check(cantor_pair(0, 0) == 0 && cantor_pair(1, 0) == 1 && cantor_pair(0, 1) == 2,
          "small values");
  return s.done();
}

SuiteResult metropolis_balance(std::uint64_t seed) {
  Suite s("metropolis_balance");
  const IsingSystem sys{2, 1.0, 1.0, 2.5};
  const std::vector<double> exact = exact_boltzmann(sys);
  MetropolisConfig cfg;
  cfg.burn_in_sweeps = 1000;
  cfg.n_samples = 1000000;
  cfg.sweeps_between = 1;
  const Dataset data = metropolis_sample(sys, cfg, seed);
  std::vector<double> counts(exact.size(), 0.0);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    std::size_t idx = 0;
    for (Token tok : data.row(r)) idx = 2 * idx + tok;
    counts[idx] += 1.0;
  }
  double tv = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k) {
    tv += std::abs(counts[k] / data.rows() - exact[k]);
  }
  tv *= 0.5;
  s.check(tv < 0.01, fmt("total variation %.4f", tv));
  return s.done();
}

}  // namespace

SelftestReport run_selftest(const SelftestOptions& options) {
  SelftestReport report;
  report.suites.push_back(kernel_normalization());
  report.suites.push_back(marginal_score_identity(options.seed + 1));
  report.suites.push_back(oracle_mi(options.seed + 2, options.corrupt_k_term));
  report.suites.push_back(gradient_suite(options.seed + 3));
  report.suites.push_back(cantor_bijection());
  report.suites.push_back(metropolis_balance(options.seed + 4));
  return report;
}

}  // namespace infosedd
