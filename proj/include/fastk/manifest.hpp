// Copyright (c) 2026 The fastk authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fastk/data_gen.hpp"
#include "fastk/idx_io.hpp"
#include "fastk/sim.hpp"
#include "fastk/trace_io.hpp"

namespace fastk {

using json = nlohmann::json;

namespace detail {

/// Unknown keys are configuration errors; reject them up front.
inline void check_keys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& context) {
  if (!obj.is_object()) throw std::runtime_error("manifest: " + context + " must be an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw std::runtime_error("manifest: unknown key \"" + item.key() + "\" in " + context);
    }
  }
}

inline const json& require(const json& obj, const std::string& key, const std::string& context) {
  if (!obj.contains(key)) {
    throw std::runtime_error("manifest: missing key \"" + key + "\" in " + context);
  }
  return obj.at(key);
}

}  // namespace detail

struct SyntheticSpec {
  std::size_t m = 0;
  std::size_t d = 0;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
};

struct CsvSpec {
  std::string path;
};

struct IdxSpec {
  std::string images;
  std::string labels;
  std::size_t limit = 0;
};

using DatasetSpec = std::variant<SyntheticSpec, CsvSpec, IdxSpec>;

/// A complete, reproducible description of one experiment batch: the
/// configuration snapshot, the dataset source, the seed list (one
/// replication per seed), loss targets for the summary, and output paths.
struct RunManifest {
  std::string name;
  std::string created;  // free-form timestamp, carried through verbatim
  std::vector<std::uint64_t> seeds;
  std::string output_dir;
  std::vector<double> targets;
  DatasetSpec dataset = SyntheticSpec{};
  ExperimentConfig config;  // per-replication seed is filled from `seeds`

  void validate() const {
    if (name.empty()) throw std::runtime_error("manifest: name must be nonempty");
    if (output_dir.empty()) throw std::runtime_error("manifest: output_dir must be nonempty");
    if (seeds.empty()) throw std::runtime_error("manifest: seed list must be nonempty");
    std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
    if (unique.size() != seeds.size()) throw std::runtime_error("manifest: seeds must be distinct");
  }
};

// ---------------------------------------------------------------------------
// JSON (de)serialization. Parsing is strict: unknown keys anywhere are
// errors, so a manifest that parses is exactly what the engine will run.
// ---------------------------------------------------------------------------

inline DatasetSpec dataset_spec_from_json(const json& j) {
  detail::check_keys(j, {"synthetic", "csv", "idx"}, "dataset");
  if (j.size() != 1) throw std::runtime_error("manifest: dataset must name exactly one source");
  if (j.contains("synthetic")) {
    const json& s = j.at("synthetic");
    detail::check_keys(s, {"m", "d", "noise_sd", "seed"}, "dataset.synthetic");
    SyntheticSpec spec;
    spec.m = detail::require(s, "m", "dataset.synthetic").get<std::size_t>();
    spec.d = detail::require(s, "d", "dataset.synthetic").get<std::size_t>();
    spec.noise_sd = s.value("noise_sd", 1.0);
    spec.seed = detail::require(s, "seed", "dataset.synthetic").get<std::uint64_t>();
    return spec;
  }
  if (j.contains("csv")) {
    const json& s = j.at("csv");
    detail::check_keys(s, {"path"}, "dataset.csv");
    return CsvSpec{detail::require(s, "path", "dataset.csv").get<std::string>()};
  }
  const json& s = j.at("idx");
  detail::check_keys(s, {"images", "labels", "limit"}, "dataset.idx");
  IdxSpec spec;
  spec.images = detail::require(s, "images", "dataset.idx").get<std::string>();
  spec.labels = detail::require(s, "labels", "dataset.idx").get<std::string>();
  spec.limit = detail::require(s, "limit", "dataset.idx").get<std::size_t>();
  return spec;
}

inline json dataset_spec_to_json(const DatasetSpec& spec) {
  json j;
  if (const auto* syn = std::get_if<SyntheticSpec>(&spec)) {
    j["synthetic"] = {{"m", syn->m}, {"d", syn->d}, {"noise_sd", syn->noise_sd}, {"seed", syn->seed}};
  } else if (const auto* csv = std::get_if<CsvSpec>(&spec)) {
    j["csv"] = {{"path", csv->path}};
  } else {
    const auto& idx = std::get<IdxSpec>(spec);
    j["idx"] = {{"images", idx.images}, {"labels", idx.labels}, {"limit", idx.limit}};
  }
  return j;
}

inline ExperimentConfig experiment_config_from_json(const json& j) {
  detail::check_keys(j, {"mode", "eta", "iterations", "n", "straggler", "loss",
                         "loss_eval_cadence"},
                     "config");
  ExperimentConfig cfg;

  const json& mode = detail::require(j, "mode", "config");
  detail::check_keys(mode, {"fixed_k", "adaptive"}, "config.mode");
  if (mode.size() != 1) throw std::runtime_error("manifest: mode must name exactly one variant");
  if (mode.contains("fixed_k")) {
    cfg.mode = FixedKMode{mode.at("fixed_k").get<int>()};
  } else {
    const json& a = mode.at("adaptive");
    detail::check_keys(a, {"policy", "step", "thresh", "burnin", "k_init", "k_max"},
                       "config.mode.adaptive");
    ControllerConfig ctrl;
    const std::string policy = a.value("policy", std::string("additive"));
    if (policy == "additive") {
      ctrl.policy = ControllerConfig::StepPolicy::additive;
    } else if (policy == "multiplicative") {
      ctrl.policy = ControllerConfig::StepPolicy::multiplicative;
    } else {
      throw std::runtime_error("manifest: unknown adaptation policy \"" + policy + "\"");
    }
    ctrl.step = detail::require(a, "step", "config.mode.adaptive").get<int>();
    ctrl.thresh = detail::require(a, "thresh", "config.mode.adaptive").get<int>();
    ctrl.burnin = detail::require(a, "burnin", "config.mode.adaptive").get<int>();
    ctrl.k_init = detail::require(a, "k_init", "config.mode.adaptive").get<int>();
    ctrl.k_max = detail::require(a, "k_max", "config.mode.adaptive").get<int>();
    cfg.mode = AdaptiveMode{ctrl};
  }

  cfg.eta = detail::require(j, "eta", "config").get<double>();
  cfg.iterations = detail::require(j, "iterations", "config").get<std::size_t>();
  cfg.n = detail::require(j, "n", "config").get<std::size_t>();

  const json& straggler = detail::require(j, "straggler", "config");
  detail::check_keys(straggler, {"kind", "rate", "value"}, "config.straggler");
  const std::string kind = detail::require(straggler, "kind", "config.straggler").get<std::string>();
  if (kind == "exponential") {
    cfg.straggler = ResponseDistribution::exponential(
        detail::require(straggler, "rate", "config.straggler").get<double>());
  } else if (kind == "constant") {
    cfg.straggler = ResponseDistribution::constant(
        detail::require(straggler, "value", "config.straggler").get<double>());
  } else {
    throw std::runtime_error("manifest: unknown straggler kind \"" + kind + "\"");
  }

  const json& loss = detail::require(j, "loss", "config");
  detail::check_keys(loss, {"family", "reg"}, "config.loss");
  const std::string family = detail::require(loss, "family", "config.loss").get<std::string>();
  if (family == "linreg") {
    cfg.loss.family = LossFamily::linreg;
  } else if (family == "logreg") {
    cfg.loss.family = LossFamily::logreg;
  } else {
    throw std::runtime_error("manifest: unknown loss family \"" + family + "\"");
  }
  cfg.loss.reg = loss.value("reg", 0.0);
  cfg.loss_eval_cadence = j.value("loss_eval_cadence", std::size_t{1});
  return cfg;
}

inline json experiment_config_to_json(const ExperimentConfig& cfg) {
  json j;
  if (const auto* fixed = std::get_if<FixedKMode>(&cfg.mode)) {
    j["mode"] = {{"fixed_k", fixed->k}};
  } else {
    const auto& ctrl = std::get<AdaptiveMode>(cfg.mode).controller;
    j["mode"] = {{"adaptive",
                  {{"policy", ctrl.policy == ControllerConfig::StepPolicy::additive
                                  ? "additive"
                                  : "multiplicative"},
                   {"step", ctrl.step},
                   {"thresh", ctrl.thresh},
                   {"burnin", ctrl.burnin},
                   {"k_init", ctrl.k_init},
                   {"k_max", ctrl.k_max}}}};
  }
  j["eta"] = cfg.eta;
  j["iterations"] = cfg.iterations;
  j["n"] = cfg.n;
  if (cfg.straggler.kind == ResponseDistribution::Kind::exponential) {
    j["straggler"] = {{"kind", "exponential"}, {"rate", cfg.straggler.rate}};
  } else {
    j["straggler"] = {{"kind", "constant"}, {"value", cfg.straggler.rate}};
  }
  if (cfg.loss.family == LossFamily::linreg) {
    j["loss"] = {{"family", "linreg"}};
  } else {
    j["loss"] = {{"family", "logreg"}, {"reg", cfg.loss.reg}};
  }
  j["loss_eval_cadence"] = cfg.loss_eval_cadence;
  return j;
}

inline RunManifest manifest_from_json(const json& j) {
  detail::check_keys(j, {"name", "created", "seeds", "output_dir", "targets", "dataset", "config"},
                     "manifest");
  RunManifest man;
  man.name = detail::require(j, "name", "manifest").get<std::string>();
  man.created = j.value("created", std::string());
  man.seeds = detail::require(j, "seeds", "manifest").get<std::vector<std::uint64_t>>();
  man.output_dir = detail::require(j, "output_dir", "manifest").get<std::string>();
  if (j.contains("targets")) man.targets = j.at("targets").get<std::vector<double>>();
  man.dataset = dataset_spec_from_json(detail::require(j, "dataset", "manifest"));
  man.config = experiment_config_from_json(detail::require(j, "config", "manifest"));
  man.validate();
  return man;
}

inline json manifest_to_json(const RunManifest& man) {
  json j;
  j["name"] = man.name;
  if (!man.created.empty()) j["created"] = man.created;
  j["seeds"] = man.seeds;
  j["output_dir"] = man.output_dir;
  if (!man.targets.empty()) j["targets"] = man.targets;
  j["dataset"] = dataset_spec_to_json(man.dataset);
  j["config"] = experiment_config_to_json(man.config);
  return j;
}

inline RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("manifest: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("manifest: parse failure in " + path + ": " + e.what());
  }
  return manifest_from_json(j);
}

// ---------------------------------------------------------------------------
// Batch execution.
// ---------------------------------------------------------------------------

inline DataSet realize_dataset(const DatasetSpec& spec) {
  if (const auto* syn = std::get_if<SyntheticSpec>(&spec)) {
    Rng rng(syn->seed);
    return gen_synthetic(syn->m, syn->d, syn->noise_sd, rng).data;
  }
  if (const auto* csv = std::get_if<CsvSpec>(&spec)) {
    return read_dataset_csv(csv->path);
  }
  const auto& idx = std::get<IdxSpec>(spec);
  return load_idx(idx.images, idx.labels, idx.limit);
}

struct RunOutputs {
  std::vector<std::string> trace_paths;
  std::string summary_path;
};

/// Run one replication per seed, write one trace file per seed plus a
/// summary with time- and communication-to-target for every target in the
/// manifest. Identical manifests produce byte-identical files.
inline RunOutputs run_experiment(const RunManifest& man) {
  man.validate();
  const DataSet data = realize_dataset(man.dataset);
  std::filesystem::create_directories(man.output_dir);

  RunOutputs outputs;
  std::ofstream summary;
  outputs.summary_path = man.output_dir + "/" + man.name + "_summary.csv";
  summary.open(outputs.summary_path);
  if (!summary) throw std::runtime_error("run_experiment: cannot open " + outputs.summary_path);
  summary << "seed,target,time,download_units,total_units\n";

  for (const std::uint64_t seed : man.seeds) {
    ExperimentConfig cfg = man.config;
    cfg.seed = seed;
    std::vector<TraceRecord> trace;
    if (cfg.loss.family == LossFamily::linreg) {
      trace = run(cfg, data, LinRegProblem{}, LinearModel(data.d)).trace;
    } else {
      trace = run(cfg, data, LogRegProblem{cfg.loss.reg}, LogisticModel(data.d)).trace;
    }
    const std::string trace_path =
        man.output_dir + "/" + man.name + "_seed" + std::to_string(seed) + ".csv";
    write_trace_csv(trace_path, trace);
    outputs.trace_paths.push_back(trace_path);

    for (const double target : man.targets) {
      summary << seed << ',' << detail::format_double(target) << ',';
      const auto time = time_to_target(trace, target);
      const auto comm = comm_to_target(trace, target);
      if (time && comm) {
        summary << detail::format_double(*time) << ',' << comm->download << ',' << comm->total;
      } else {
        summary << "none,none,none";
      }
      summary << '\n';
    }
  }
  if (!summary) throw std::runtime_error("run_experiment: write failure on summary");
  return outputs;
}

}  // namespace fastk
