// Copyright (c) 2026 The fastk authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: dataset generation, theory-curve emission,
// manifest-driven simulation batches, and trace summarization.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fastk/fastk.hpp"

namespace {

int cmd_gen_data(std::size_t m, std::size_t d, double noise_sd, std::uint64_t seed,
                 const std::string& out, const std::string& planted_out) {
  fastk::Rng rng(seed);
  const auto synth = fastk::gen_synthetic(m, d, noise_sd, rng);
  fastk::write_dataset_csv(out, synth.data);
  std::cout << "wrote " << out << " (" << m << " rows, " << d << " features)\n";
  if (!planted_out.empty()) {
    std::ofstream pw(planted_out);
    if (!pw) throw std::runtime_error("cannot open " + planted_out);
    for (std::size_t i = 0; i < synth.planted_w.size(); ++i) {
      pw << "w" << i << (i + 1 < synth.planted_w.size() ? ',' : '\n');
    }
    for (std::size_t i = 0; i < synth.planted_w.size(); ++i) {
      pw << fastk::detail::format_double(synth.planted_w[i])
         << (i + 1 < synth.planted_w.size() ? ',' : '\n');
    }
    std::cout << "wrote " << planted_out << '\n';
  }
  return 0;
}

int cmd_theory(const fastk::SystemParams& params, double t_max, std::size_t points,
               const std::string& curves_out, const std::string& schedule_out) {
  if (points < 2) throw std::runtime_error("theory: need at least 2 grid points");
  if (t_max <= 0.0) throw std::runtime_error("theory: t-max must be positive");
  std::vector<double> grid;
  grid.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid.push_back(t_max * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  const auto tables = fastk::emit_theory(params, grid);
  fastk::write_curve_table(curves_out, tables.curves);
  fastk::write_schedule_csv(schedule_out, tables.schedule);
  std::cout << "wrote " << curves_out << " and " << schedule_out << '\n';
  std::cout << "switch times (k -> k+1):";
  for (std::size_t i = 0; i < tables.schedule.switch_times.size(); ++i) {
    std::cout << ' ' << (i + 1) << "->" << (i + 2) << " at t="
              << fastk::detail::format_double(tables.schedule.switch_times[i]);
  }
  std::cout << '\n';
  return 0;
}

int cmd_simulate(const std::string& manifest_path) {
  const auto manifest = fastk::load_manifest(manifest_path);
  const auto outputs = fastk::run_experiment(manifest);
  for (const auto& p : outputs.trace_paths) std::cout << "wrote " << p << '\n';
  std::cout << "wrote " << outputs.summary_path << '\n';
  return 0;
}

int cmd_summarize(const std::vector<std::string>& traces, const std::vector<double>& targets,
                  const std::string& out) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw std::runtime_error("cannot open " + out);
    os = &file;
  }
  *os << "trace,target,time,download_units,total_units\n";
  for (const auto& path : traces) {
    const auto trace = fastk::read_trace_csv(path);
    for (const double target : targets) {
      *os << path << ',' << fastk::detail::format_double(target) << ',';
      const auto time = fastk::time_to_target(trace, target);
      const auto comm = fastk::comm_to_target(trace, target);
      if (time && comm) {
        *os << fastk::detail::format_double(*time) << ',' << comm->download << ','
            << comm->total;
      } else {
        *os << "none,none,none";
      }
      *os << '\n';
    }
  }
  if (!out.empty()) std::cout << "wrote " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fastest-k SGD simulator and bound explorer"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "generate a synthetic regression dataset");
  std::size_t gen_m = 2000;
  std::size_t gen_d = 100;
  double gen_noise = 1.0;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "dataset.csv";
  std::string gen_planted;
  gen->add_option("--m", gen_m, "number of rows")->required();
  gen->add_option("--d", gen_d, "feature dimension")->required();
  gen->add_option("--noise-sd", gen_noise, "label noise standard deviation");
  gen->add_option("--seed", gen_seed, "generator seed")->required();
  gen->add_option("--out", gen_out, "output dataset csv")->required();
  gen->add_option("--planted-out", gen_planted, "optional csv for the planted weights");

  // theory
  auto* theory = app.add_subcommand("theory", "emit bound curves and the switching schedule");
  fastk::SystemParams params;
  double t_max = 1e4;
  std::size_t points = 1001;
  std::string curves_out = "curves.csv";
  std::string schedule_out = "schedule.csv";
  theory->add_option("--eta", params.eta, "step size")->required();
  theory->add_option("--L", params.L, "Lipschitz constant")->required();
  theory->add_option("--c", params.c, "strong convexity parameter")->required();
  theory->add_option("--sigma2", params.sigma2, "gradient variance bound")->required();
  theory->add_option("--s", params.s, "data vectors per worker")->required();
  theory->add_option("--n", params.n, "worker count")->required();
  theory->add_option("--rate", params.rate, "exponential response rate")->required();
  theory->add_option("--e0", params.e0, "initial optimality gap")->required();
  theory->add_option("--mg", params.mg, "variance-bound slope (default 0)");
  theory->add_option("--eps", params.eps, "probability error term (default 0.1)");
  theory->add_option("--t-max", t_max, "grid end time")->required();
  theory->add_option("--points", points, "grid point count")->required();
  theory->add_option("--curves-out", curves_out, "curve table output path");
  theory->add_option("--schedule-out", schedule_out, "schedule output path");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run the experiment batch in a manifest");
  std::string manifest_path;
  simulate->add_option("--manifest", manifest_path, "manifest json path")->required();

  // summarize
  auto* summarize = app.add_subcommand("summarize", "time/communication-to-target tables");
  std::vector<std::string> traces;
  std::vector<double> targets;
  std::string summary_out;
  summarize->add_option("--trace", traces, "trace csv (repeatable)")->required();
  summarize->add_option("--target", targets, "loss target (repeatable)")->required();
  summarize->add_option("--out", summary_out, "write the table here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_gen_data(gen_m, gen_d, gen_noise, gen_seed, gen_out, gen_planted);
    }
    if (theory->parsed()) {
      return cmd_theory(params, t_max, points, curves_out, schedule_out);
    }
    if (simulate->parsed()) return cmd_simulate(manifest_path);
    if (summarize->parsed()) return cmd_summarize(traces, targets, summary_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
