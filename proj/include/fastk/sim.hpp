// Copyright (c) 2026 The fastk authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "fastk/controller.hpp"
#include "fastk/dataset.hpp"
#include "fastk/losses.hpp"
#include "fastk/straggler.hpp"

namespace fastk {

struct FixedKMode {
  int k = 1;
};

struct AdaptiveMode {
  ControllerConfig controller;
};

enum class LossFamily { linreg, logreg };

struct LossSpec {
  LossFamily family = LossFamily::linreg;
  double reg = 0.0;  // logreg only
};

struct ExperimentConfig {
  std::variant<FixedKMode, AdaptiveMode> mode = FixedKMode{};
  double eta = 0.0;
  std::size_t iterations = 1;  // J
  ResponseDistribution straggler = ResponseDistribution::exponential(1.0);
  std::size_t n = 1;
  LossSpec loss;
  std::uint64_t seed = 0;
  std::size_t loss_eval_cadence = 1;

  void validate(const DataSet& data) const {
    data.validate();
    if (eta <= 0.0) throw std::invalid_argument("ExperimentConfig: eta must be positive");
    if (iterations < 1) throw std::invalid_argument("ExperimentConfig: iterations must be >= 1");
    if (n < 1) throw std::invalid_argument("ExperimentConfig: n must be >= 1");
    if (loss_eval_cadence < 1) {
      throw std::invalid_argument("ExperimentConfig: loss_eval_cadence must be >= 1");
    }
    if (data.m % n != 0) {
      throw std::invalid_argument("ExperimentConfig: n must divide the dataset row count");
    }
    if (const auto* fixed = std::get_if<FixedKMode>(&mode)) {
      if (fixed->k < 1 || static_cast<std::size_t>(fixed->k) > n) {
        throw std::invalid_argument("ExperimentConfig: fixed k out of range");
      }
    } else {
      std::get<AdaptiveMode>(mode).controller.validate(static_cast<int>(n));
    }
    if (loss.family == LossFamily::linreg && loss.reg != 0.0) {
      throw std::invalid_argument("ExperimentConfig: linreg takes no regularizer");
    }
    if (loss.reg < 0.0) throw std::invalid_argument("ExperimentConfig: reg must be nonnegative");
  }
};

/// One simulated iteration. wall_clock accumulates the per-iteration k-th
/// order statistics; the communication counters are cumulative (download in
/// gradient units, upload in model-broadcast units). Loss is present only at
/// evaluation-cadence points and on the final iteration.
struct TraceRecord {
  std::size_t iteration = 0;  // 1-based
  double wall_clock = 0.0;
  int k_used = 0;
  std::optional<double> loss;
  std::uint64_t download_units = 0;
  std::uint64_t upload_units = 0;
};

template <typename Model>
struct RunResult {
  std::vector<TraceRecord> trace;
  Model final_model;
};

/// Simulate fastest-k SGD: per iteration, sample all n response times, take
/// the k fastest workers' partial gradients, average them, step the model,
/// and advance the clock by the k-th order statistic. The slowest n-k
/// computations are discarded. In adaptive mode the aggregated gradient
/// feeds the controller and any k change takes effect at the next iteration.
/// Loss evaluation is an observer: it adds neither time nor communication.
template <typename Problem>
RunResult<typename Problem::Model> run(const ExperimentConfig& cfg, const DataSet& data,
                                       const Problem& problem,
                                       typename Problem::Model model) {
  cfg.validate(data);
  const Partition part = partition_data(data, cfg.n);
  Rng rng(cfg.seed);

  const auto* adaptive = std::get_if<AdaptiveMode>(&cfg.mode);
  ControllerState ctrl;
  int k = 0;
  if (adaptive) {
    ctrl = ControllerState::fresh(adaptive->controller);
    k = ctrl.k;
  } else {
    k = std::get<FixedKMode>(cfg.mode).k;
  }

  std::vector<TraceRecord> trace;
  trace.reserve(cfg.iterations);
  double wall_clock = 0.0;
  std::uint64_t download = 0;
  std::uint64_t upload = 0;

  for (std::size_t j = 1; j <= cfg.iterations; ++j) {
    const std::vector<double> times = sample_response_times(cfg.straggler, cfg.n, rng);
    const int k_used = k;
    const auto fastest = fastest_k_indices(times, static_cast<std::size_t>(k_used));

    double duration = 0.0;
    Gradient ghat;
    ghat.values.assign(model.param_count(), 0.0);
    for (std::size_t worker : fastest) {
      duration = std::max(duration, times[worker]);
      const Gradient partial = problem.partial_gradient(data, part.block(worker), model);
      for (std::size_t i = 0; i < ghat.size(); ++i) ghat.values[i] += partial.values[i];
    }
    const double inv_k = 1.0 / static_cast<double>(k_used);
    for (double& v : ghat.values) v *= inv_k;

    apply_update(model, ghat, cfg.eta);
    wall_clock += duration;
    download += static_cast<std::uint64_t>(k_used);
    upload += static_cast<std::uint64_t>(cfg.n);

    if (adaptive) {
      observe(ctrl, ghat, adaptive->controller);
      k = ctrl.k;
    }

    TraceRecord rec;
    rec.iteration = j;
    rec.wall_clock = wall_clock;
    rec.k_used = k_used;
    rec.download_units = download;
    rec.upload_units = upload;
    if ((j - 1) % cfg.loss_eval_cadence == 0 || j == cfg.iterations) {
      rec.loss = problem.loss(data, model);
    }
    trace.push_back(std::move(rec));
  }
  return {std::move(trace), std::move(model)};
}

/// Earliest recorded wall-clock time at which the logged loss reached the
/// target; records without a loss evaluation are skipped.
inline std::optional<double> time_to_target(const std::vector<TraceRecord>& trace,
                                            double target_loss) {
  if (trace.empty()) throw std::invalid_argument("time_to_target: empty trace");
  for (const auto& rec : trace) {
    if (rec.loss && *rec.loss <= target_loss) return rec.wall_clock;
  }
  return std::nullopt;
}

struct CommCost {
  std::uint64_t download = 0;
  std::uint64_t total = 0;
};

/// Cumulative (download, download + upload) units at the first record whose
/// logged loss reached the target.
inline std::optional<CommCost> comm_to_target(const std::vector<TraceRecord>& trace,
                                              double target_loss) {
  if (trace.empty()) throw std::invalid_argument("comm_to_target: empty trace");
  for (const auto& rec : trace) {
    if (rec.loss && *rec.loss <= target_loss) {
      return CommCost{rec.download_units, rec.download_units + rec.upload_units};
    }
  }
  return std::nullopt;
}

}  // namespace fastk
