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

// infosedd command-line front end.
//
// Every command resolves its settings into one JSON document (defaults,
// then --config, then flags) and writes that document next to its outputs.
// Feeding the resolved file back through --config reproduces the run.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "infosedd/dataset.hpp"
#include "infosedd/error.hpp"
#include "infosedd/estimators.hpp"
#include "infosedd/exact.hpp"
#include "infosedd/ising.hpp"
#include "infosedd/pipeline.hpp"
#include "infosedd/score_net.hpp"
#include "infosedd/selftest.hpp"
#include "infosedd/synth.hpp"
#include "infosedd/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace infosedd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFault = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  bool overwrite = false;
};

json default_envelope(const std::string& command) {
  const char* env = std::getenv("INFOSEDD_OUT_DIR");
  NetArchitecture arch;
  json net = arch.to_json();
  net.erase("M");
  net.erase("N");
  return json{{"command", command},
              {"seed", 0},
              {"out_dir", env && *env ? env : "."},
              {"schedule", NoiseSchedule::geometric().to_json()},
              {"estimator", EstimatorConfig{}.to_json()},
              {"train", TrainConfig{}.to_json()},
              {"net", net}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
}

/// Applies defaults, then the config file, then flags; unset seeds in the
/// train block inherit from the envelope.
json resolve(const std::string& command, const Common& common, json flags) {
  json resolved = default_envelope(command);
  const auto seeded = [](const json& j, const char* section) {
    return j.contains(section) && j[section].contains("seed");
  };
  bool train_seed = seeded(flags, "train");
  bool estimator_seed = seeded(flags, "estimator");
  if (!common.config_path.empty()) {
    json file = read_json_file(common.config_path);
    if (!file.is_object()) throw UsageError("config must be a JSON object");
    if (file.contains("command") && file["command"] != command) {
      throw UsageError("config was resolved for " + file["command"].dump() + ", not " +
                       command);
    }
    train_seed = train_seed || seeded(file, "train");
    estimator_seed = estimator_seed || seeded(file, "estimator");
    resolved.merge_patch(file);
  }
  if (common.seed) resolved["seed"] = *common.seed;
  if (common.out_dir) resolved["out_dir"] = *common.out_dir;
  resolved.merge_patch(flags);
  const std::uint64_t seed = resolved["seed"].get<std::uint64_t>();
  if (!train_seed) resolved["train"]["seed"] = seed;
  if (!estimator_seed) resolved["estimator"]["seed"] = seed;
  return resolved;
}

template <typename T>
void put(json& j, const std::string& section, const std::string& key,
         const std::optional<T>& value) {
  if (value) j[section][key] = *value;
}

fs::path output_path(const json& cfg, const std::string& name) {
  fs::path p(name);
  if (p.is_relative()) p = fs::path(cfg["out_dir"].get<std::string>()) / p;
  return p;
}

void claim_outputs(const std::vector<fs::path>& paths, bool overwrite) {
  for (const auto& p : paths) {
    if (!overwrite && fs::exists(p)) {
      throw UsageError("output " + p.string() + " exists; pass --overwrite to replace it");
    }
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
  }
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

NetArchitecture architecture_from(const json& cfg, int length, int vocab) {
  json a = cfg["net"];
  a["M"] = length;
  a["N"] = vocab;
  return NetArchitecture::from_json(a);
}

EstimatorConfig estimator_from(const json& cfg, const Common& common) {
  EstimatorConfig ec = EstimatorConfig::from_json(cfg["estimator"]);
  if (common.threads) ec.threads = *common.threads;
  return ec;
}

// ---------------------------------------------------------------------------
// gen

struct GenFlags {
  std::optional<std::string> preset, name, pmf;
  std::optional<double> mi, p, temperature;
  std::optional<int> support, length, lattice, burn_in, between;
  std::optional<std::size_t> rows;
};

int cmd_gen(const Common& common, const GenFlags& f) {
  json flags = json::object();
  flags["gen"] = {{"preset", f.preset.value_or("support-sweep")}};
  put(flags, "gen", "name", f.name);
  put(flags, "gen", "pmf", f.pmf);
  put(flags, "gen", "mi", f.mi);
  put(flags, "gen", "p", f.p);
  put(flags, "gen", "T", f.temperature);
  put(flags, "gen", "support", f.support);
  put(flags, "gen", "length", f.length);
  put(flags, "gen", "L", f.lattice);
  put(flags, "gen", "burn_in", f.burn_in);
  put(flags, "gen", "sweeps_between", f.between);
  put(flags, "gen", "rows", f.rows);
  if (!f.preset && !common.config_path.empty()) flags["gen"].erase("preset");
  json cfg = resolve("gen", common, flags);
  json& g = cfg["gen"];
  const json defaults = {{"preset", "support-sweep"}, {"name", "dataset"}, {"mi", 0.5},
                         {"support", 2}, {"length", 2}, {"p", 0.2}, {"rows", 100000},
                         {"L", 10}, {"T", 2.0}, {"burn_in", 1000}, {"sweeps_between", 10},
                         {"pmf", ""}};
  for (auto it = defaults.begin(); it != defaults.end(); ++it) {
    if (!g.contains(it.key())) g[it.key()] = it.value();
  }
  const std::string preset = g["preset"];
  const std::uint64_t seed = cfg["seed"];
  const std::size_t rows = g["rows"];
  const std::string name = g["name"];
  const fs::path data_path = output_path(cfg, name + ".bin");
  const fs::path pmf_path = output_path(cfg, name + ".pmf.json");
  const fs::path cfg_path = output_path(cfg, name + ".config.json");

  std::optional<Dataset> data;
  std::optional<ExactPMF> pmf;
  if (preset == "support-sweep" || preset == "length-sweep" || preset == "mi-sweep") {
    const double mi = g["mi"];
    ConcatGenerator gen =
        preset == "support-sweep" ? support_sweep_preset(mi, g["support"], seed)
        : preset == "length-sweep" ? length_sweep_preset(mi, g["length"], seed)
                                   : mi_sweep_preset(mi, g["length"], seed);
    data = sample_dataset(gen, rows, seed);
    if (gen.has_explicit_joint()) pmf = gen.explicit_joint();
  } else if (preset == "bernoulli-product") {
    const double p = g["p"];
    pmf = ExactPMF::product(std::vector<std::vector<double>>(g["length"].get<int>(), {1.0 - p, p}));
  } else if (preset == "uniform") {
    pmf = ExactPMF::uniform(g["length"], g["support"]);
  } else if (preset == "pmf") {
    if (g["pmf"].get<std::string>().empty()) throw UsageError("preset pmf needs --pmf");
    pmf = ExactPMF::load(g["pmf"]);
  } else if (preset == "ising") {
    const IsingSystem sys{g["L"].get<int>(), 1.0, 1.0, g["T"].get<double>()};
    MetropolisConfig mc;
    mc.burn_in_sweeps = g["burn_in"];
    mc.sweeps_between = g["sweeps_between"];
    mc.n_samples = rows;
    data = metropolis_sample(sys, mc, seed);
    data->meta()["ground_truth_entropy_per_site"] = onsager_entropy_per_site(sys.T);
  } else {
    throw UsageError("unknown preset '" + preset + "'");
  }
  if (!data) data = sample_dataset(*pmf, rows, seed);
  data->meta()["preset"] = preset;

  std::vector<fs::path> outputs{data_path, fs::path(data_path.string() + ".json"), cfg_path};
  if (pmf) outputs.push_back(pmf_path);
  claim_outputs(outputs, common.overwrite);
  data->save(data_path.string());
  if (pmf) pmf->save(pmf_path.string());
  write_json(cfg_path, cfg);
  std::cout << "wrote " << data_path.string() << " (" << data->rows() << " rows, M = "
            << data->length() << ", N = " << data->vocab() << ")";
  if (auto mi = data->ground_truth_mi()) std::cout << ", ground-truth MI " << *mi;
  std::cout << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainFlags {
  std::optional<std::string> data, checkpoint, resume, parameterization;
  std::optional<int> steps, batch, eval_every, width, depth, embed_dim, time_features;
  std::optional<double> lr;
  std::optional<std::uint64_t> net_seed;
};

int cmd_train(const Common& common, const TrainFlags& f) {
  json flags = json::object();
  put(flags, "train", "steps", f.steps);
  put(flags, "train", "batch_size", f.batch);
  put(flags, "train", "eval_every", f.eval_every);
  put(flags, "train", "learning_rate", f.lr);
  put(flags, "net", "width", f.width);
  put(flags, "net", "depth", f.depth);
  put(flags, "net", "embed_dim", f.embed_dim);
  put(flags, "net", "time_features", f.time_features);
  put(flags, "net", "parameterization", f.parameterization);
  put(flags, "run", "data", f.data);
  put(flags, "run", "checkpoint", f.checkpoint);
  put(flags, "run", "resume", f.resume);
  put(flags, "run", "net_seed", f.net_seed);
  json cfg = resolve("train", common, flags);
  json& run = cfg["run"];
  if (!run.contains("data")) throw UsageError("train needs --data");
  if (!run.contains("checkpoint")) run["checkpoint"] = "model.ckpt";
  if (!run.contains("net_seed")) run["net_seed"] = cfg["seed"].get<std::uint64_t>() + 1;
  if (!run.contains("resume")) run["resume"] = "";

  const Dataset data = Dataset::load(run["data"]);
  const NoiseSchedule schedule = NoiseSchedule::from_json(cfg["schedule"]);
  const TrainConfig tc = TrainConfig::from_json(cfg["train"]);
  const fs::path ckpt = output_path(cfg, run["checkpoint"]);
  const fs::path trace_path = ckpt.string() + ".loss.csv";
  const fs::path cfg_path = ckpt.string() + ".config.json";
  claim_outputs({ckpt, trace_path, cfg_path}, common.overwrite);

  const std::string resume = run["resume"];
  ScoreNet net = resume.empty()
                     ? ScoreNet(architecture_from(cfg, data.length(), data.vocab()),
                                schedule, run["net_seed"].get<std::uint64_t>())
                     : ScoreNet::load(resume, data.length(), data.vocab());
  write_json(cfg_path, cfg);
  try {
    const TrainTrace trace = train(net, data, tc);
    net.save(ckpt.string());
    trace.write_csv(trace_path.string());
    std::cout << "wrote " << ckpt.string() << " (" << net.parameter_count()
              << " parameters, final loss " << trace.points.back().loss << ")\n";
  } catch (const TrainingDiverged& e) {
    net.save(ckpt.string());
    e.trace().write_csv(trace_path.string());
    std::cerr << "error: " << e.what() << "; last finite parameters saved to "
              << ckpt.string() << '\n';
    return kExitFault;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateFlags {
  std::string kind;
  std::optional<std::string> checkpoint, reference_checkpoint, data, exact, reference,
      report, csv, id;
  std::optional<std::int64_t> samples;
  std::optional<int> strata, batch, split;
  bool plain_time = false;
};

int cmd_estimate(const Common& common, const EstimateFlags& f) {
  json flags = json::object();
  flags["run"] = {{"kind", f.kind}};
  put(flags, "run", "checkpoint", f.checkpoint);
  put(flags, "run", "reference_checkpoint", f.reference_checkpoint);
  put(flags, "run", "data", f.data);
  put(flags, "run", "exact", f.exact);
  put(flags, "run", "reference_exact", f.reference);
  put(flags, "run", "report", f.report);
  put(flags, "run", "csv", f.csv);
  put(flags, "run", "experiment_id", f.id);
  put(flags, "run", "block_split", f.split);
  put(flags, "estimator", "n_samples", f.samples);
  put(flags, "estimator", "time_strata", f.strata);
  put(flags, "estimator", "score_batch", f.batch);
  if (f.plain_time) flags["estimator"]["stratified"] = false;
  json cfg = resolve("estimate", common, flags);
  json& run = cfg["run"];
  const std::string kind = run["kind"];
  const auto text = [&](const char* key) {
    return run.contains(key) ? run[key].get<std::string>() : std::string();
  };
  if (!run.contains("report")) run["report"] = "estimate-" + kind + ".json";
  if (!run.contains("csv")) run["csv"] = "estimates.csv";
  if (!run.contains("experiment_id")) run["experiment_id"] = kind;

  const NoiseSchedule schedule = NoiseSchedule::from_json(cfg["schedule"]);
  const EstimatorConfig ec = estimator_from(cfg, common);
  const bool exact_mode = !text("exact").empty();
  if (exact_mode == !text("checkpoint").empty()) {
    throw UsageError("estimate needs exactly one of --exact or --checkpoint");
  }

  const fs::path report_path = output_path(cfg, run["report"]);
  const fs::path cfg_path = report_path.string() + ".config.json";
  const fs::path timing_path = report_path.string() + ".timing.json";
  const fs::path csv_path = output_path(cfg, run["csv"]);
  claim_outputs({report_path, cfg_path, timing_path}, common.overwrite);
  if (csv_path.has_parent_path()) fs::create_directories(csv_path.parent_path());

  EstimateReport report;
  if (exact_mode) {
    const ExactPMF p = ExactPMF::load(text("exact"));
    const ExactScoreSource source(p, schedule);
    const PmfSampler sampler(p);
    const SampleFn draw = [&](Rng& rng, std::span<Token> out) { sampler.sample(rng, out); };
    if (kind == "mi") {
      if (!p.block_split()) throw UsageError("--exact pmf has no block_split");
      report = estimate_mi(source, *p.block_split(), draw, schedule, ec);
    } else if (kind == "entropy") {
      report = estimate_entropy(source, draw, schedule, ec);
    } else {
      if (text("reference_exact").empty()) throw UsageError("estimate kl --exact needs --reference");
      const ExactScoreSource reference(ExactPMF::load(text("reference_exact")), schedule);
      report = estimate_kl(source, reference, draw, schedule, ec);
    }
  } else {
    if (text("data").empty()) throw UsageError("--checkpoint needs --data");
    const Dataset data = Dataset::load(text("data"));
    const ScoreNet net = ScoreNet::load(text("checkpoint"), data.length(), data.vocab());
    const SampleFn draw = dataset_sampler(data);
    if (kind == "mi") {
      const int split = run.contains("block_split") ? run["block_split"].get<int>()
                        : data.block_split()     ? *data.block_split()
                                                 : 0;
      if (split == 0) throw UsageError("dataset has no block split; pass --split");
      report = estimate_mi(net, split, draw, schedule, ec);
    } else if (kind == "entropy") {
      report = estimate_entropy(net, draw, schedule, ec);
    } else {
      if (text("reference_checkpoint").empty()) {
        throw UsageError("estimate kl --checkpoint needs --reference-checkpoint");
      }
      const ScoreNet q = ScoreNet::load(text("reference_checkpoint"), data.length(), data.vocab());
      report = estimate_kl(net, q, draw, schedule, ec);
    }
  }

  write_json(report_path, report.to_json());
  write_json(cfg_path, cfg);
  write_json(timing_path, json{{"wall_time_seconds", report.wall_time}});
  const bool fresh = !fs::exists(csv_path);
  std::ofstream csv(csv_path, std::ios::app);
  if (!csv) throw FormatError("cannot append to " + csv_path.string());
  if (fresh) csv << EstimateReport::csv_header() << '\n';
  csv << report.csv_row(run["experiment_id"]) << '\n';
  std::cout << kind << " = " << report.estimate << " +- " << report.stderr_ << " nats";
  if (report.kl_to_uniform) std::cout << " (KL to uniform " << *report.kl_to_uniform << ")";
  std::cout << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// ising

struct IsingFlags {
  std::optional<int> lattice, burn_in, between, steps, width, depth;
  std::optional<std::vector<double>> temperatures;
  std::optional<std::size_t> samples;
  std::optional<double> lr;
  std::optional<std::string> csv;
};

int cmd_ising(const Common& common, const IsingFlags& f) {
  json flags = json::object();
  put(flags, "ising", "L", f.lattice);
  put(flags, "ising", "burn_in", f.burn_in);
  put(flags, "ising", "sweeps_between", f.between);
  put(flags, "ising", "samples", f.samples);
  put(flags, "ising", "temperatures", f.temperatures);
  put(flags, "ising", "csv", f.csv);
  put(flags, "train", "steps", f.steps);
  put(flags, "train", "learning_rate", f.lr);
  put(flags, "net", "width", f.width);
  put(flags, "net", "depth", f.depth);
  json cfg = resolve("ising", common, flags);
  json& is = cfg["ising"];
  const json defaults = {{"L", 10}, {"burn_in", 1000}, {"sweeps_between", 10},
                         {"samples", 10000}, {"temperatures", {2.0, 3.5}},
                         {"csv", "ising.csv"}};
  for (auto it = defaults.begin(); it != defaults.end(); ++it) {
    if (!is.contains(it.key())) is[it.key()] = it.value();
  }
  IsingExperimentConfig ic;
  ic.L = is["L"];
  ic.temperatures = is["temperatures"].get<std::vector<double>>();
  ic.sampler.burn_in_sweeps = is["burn_in"];
  ic.sampler.sweeps_between = is["sweeps_between"];
  ic.sampler.n_samples = is["samples"];
  ic.arch = architecture_from(cfg, ic.L * ic.L, 2);
  ic.schedule = NoiseSchedule::from_json(cfg["schedule"]);
  ic.train = TrainConfig::from_json(cfg["train"]);
  ic.estimator = estimator_from(cfg, common);
  ic.seed = cfg["seed"];
  const fs::path csv_path = output_path(cfg, is["csv"]);
  const fs::path cfg_path = csv_path.string() + ".config.json";
  claim_outputs({csv_path, cfg_path}, common.overwrite);
  write_json(cfg_path, cfg);
  const auto rows = run_ising_experiment(ic);
  write_ising_csv(rows, csv_path.string());
  for (const auto& r : rows) {
    std::cout << "T = " << r.T << ": H/site = " << r.h_estimated << " +- " << r.h_stderr
              << " (Onsager " << r.h_analytic << ")\n";
  }
  return kExitOk;
}

int cmd_selftest(std::uint64_t seed, bool corrupt) {
  SelftestOptions opts;
  opts.seed = seed;
  opts.corrupt_k_term = corrupt;
  const SelftestReport report = run_selftest(opts);
  report.print(std::cout);
  return report.ok() ? kExitOk : kExitFault;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON config (a resolved config reproduces a run)");
  cmd->add_option("--seed", c.seed, "Root seed");
  cmd->add_option("--out-dir", c.out_dir, "Output directory (default $INFOSEDD_OUT_DIR or .)");
  cmd->add_option("--threads", c.threads, "Worker threads for estimation")->check(CLI::PositiveNumber);
  cmd->add_flag("--overwrite", c.overwrite, "Replace existing outputs");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"infosedd: KL, mutual information and entropy estimation with absorbing discrete diffusion"};
  app.require_subcommand(1);
  Common common;

  GenFlags gen;
  auto* g = app.add_subcommand("gen", "Generate a benchmark dataset");
  add_common(g, common);
  g->add_option("--preset", gen.preset,
                "support-sweep | length-sweep | mi-sweep | bernoulli-product | uniform | pmf | ising");
  g->add_option("--name", gen.name, "Output basename");
  g->add_option("--pmf", gen.pmf, "Explicit pmf JSON (preset pmf)");
  g->add_option("--mi", gen.mi, "Target mutual information (nats)");
  g->add_option("--support", gen.support, "Symbols per variable");
  g->add_option("--length", gen.length, "Sequence length (see presets)");
  g->add_option("--p", gen.p, "Bernoulli parameter");
  g->add_option("--rows", gen.rows, "Number of rows");
  g->add_option("--L", gen.lattice, "Ising lattice side");
  g->add_option("--T", gen.temperature, "Ising temperature");
  g->add_option("--burn-in", gen.burn_in, "Ising burn-in sweeps");
  g->add_option("--between", gen.between, "Ising sweeps between samples");

  TrainFlags tr;
  auto* t = app.add_subcommand("train", "Train a score network on a dataset");
  add_common(t, common);
  t->add_option("--data", tr.data, "Dataset path");
  t->add_option("--checkpoint", tr.checkpoint, "Output checkpoint");
  t->add_option("--resume", tr.resume, "Continue from this checkpoint");
  t->add_option("--steps", tr.steps);
  t->add_option("--batch", tr.batch);
  t->add_option("--lr", tr.lr);
  t->add_option("--eval-every", tr.eval_every);
  t->add_option("--width", tr.width);
  t->add_option("--depth", tr.depth);
  t->add_option("--embed-dim", tr.embed_dim);
  t->add_option("--time-features", tr.time_features);
  t->add_option("--parameterization", tr.parameterization, "conditional | raw");
  t->add_option("--net-seed", tr.net_seed);

  EstimateFlags es;
  auto* e = app.add_subcommand("estimate", "Estimate mi, entropy or kl");
  add_common(e, common);
  e->add_option("kind", es.kind)->required()->check(CLI::IsMember({"mi", "entropy", "kl"}));
  e->add_option("--checkpoint", es.checkpoint, "Trained network");
  e->add_option("--reference-checkpoint", es.reference_checkpoint, "Second network (kl)");
  e->add_option("--data", es.data, "Dataset the samples are drawn from");
  e->add_option("--exact", es.exact, "Exact pmf JSON; skips training");
  e->add_option("--reference", es.reference, "Exact reference pmf JSON (kl)");
  e->add_option("--split", es.split, "Block split override (mi)");
  e->add_option("--samples", es.samples);
  e->add_option("--strata", es.strata);
  e->add_option("--score-batch", es.batch);
  e->add_flag("--plain-time", es.plain_time, "Uniform t without strata");
  e->add_option("--report", es.report, "Report JSON path");
  e->add_option("--csv", es.csv, "CSV log the result row is appended to");
  e->add_option("--id", es.id, "experiment_id column");

  IsingFlags is;
  auto* i = app.add_subcommand("ising", "Ising entropy experiment");
  add_common(i, common);
  i->add_option("--L", is.lattice);
  i->add_option("--temperatures", is.temperatures)->delimiter(',');
  i->add_option("--samples", is.samples);
  i->add_option("--burn-in", is.burn_in);
  i->add_option("--between", is.between);
  i->add_option("--steps", is.steps);
  i->add_option("--lr", is.lr);
  i->add_option("--width", is.width);
  i->add_option("--depth", is.depth);
  i->add_option("--csv", is.csv);

  std::uint64_t selftest_seed = 0;
  bool corrupt = false;
  auto* s = app.add_subcommand("selftest", "Run the oracle invariant suite");
  s->add_option("--seed", selftest_seed);
  s->add_flag("--corrupt-k-term", corrupt, "Break the divergence term (fixture)")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(common, gen);
    if (t->parsed()) return cmd_train(common, tr);
    if (e->parsed()) return cmd_estimate(common, es);
    if (i->parsed()) return cmd_ising(common, is);
    if (s->parsed()) return cmd_selftest(selftest_seed, corrupt);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& err) {
    std::cerr << "format error: " << err.what() << '\n';
    return kExitFault;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitFault;
  }
  return kExitUsage;
}
