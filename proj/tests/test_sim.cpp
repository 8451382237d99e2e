#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fastk/data_gen.hpp"
#include "fastk/sim.hpp"

using namespace fastk;

namespace {

ExperimentConfig base_config(std::size_t n, std::size_t iterations, double eta) {
  ExperimentConfig cfg;
  cfg.mode = FixedKMode{static_cast<int>(n)};
  cfg.eta = eta;
  cfg.iterations = iterations;
  cfg.straggler = ResponseDistribution::exponential(1.0);
  cfg.n = n;
  cfg.seed = 404;
  cfg.loss_eval_cadence = 1;
  return cfg;
}

}  // namespace

TEST_CASE("partition splits rows into equal contiguous blocks") {
  DataSet data(2000, 3);
  const auto part = partition_data(data, 50);
  REQUIRE(part.s == 40);
  REQUIRE(part.workers() == 50);
  REQUIRE(part.block(0).begin == 0);
  REQUIRE(part.block(0).end == 40);
  REQUIRE(part.block(49).end == 2000);

  DataSet tiny(10, 1);
  REQUIRE(partition_data(tiny, 10).s == 1);
  REQUIRE_THROWS_AS(partition_data(tiny, 3), std::invalid_argument);
}

TEST_CASE("fastest-k with k = n and constant times reproduces full-batch GD") {
  Rng data_rng(2024);
  auto synth = gen_synthetic(24, 3, 1.0, data_rng);

  auto cfg = base_config(4, 60, 0.004);
  cfg.straggler = ResponseDistribution::constant(1.0);
  const auto result = run(cfg, synth.data, LinRegProblem{}, LinearModel(3));

  // reference: plain gradient descent with the mean per-row gradient
  LinearModel reference(3);
  for (std::size_t j = 0; j < 60; ++j) {
    const auto g = linreg_partial_gradient(synth.data, reference);
    apply_update(reference, g, cfg.eta);
    const double engine_loss = *result.trace[j].loss;
    const double reference_loss = linreg_loss(synth.data, reference);
    REQUIRE(engine_loss == Catch::Approx(reference_loss).epsilon(1e-12));
  }
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(result.final_model.w[i] == Catch::Approx(reference.w[i]).epsilon(1e-12));
  }
  // constant unit times: the clock advances by exactly 1 per iteration
  REQUIRE(result.trace.back().wall_clock == Catch::Approx(60.0).epsilon(1e-12));
}

TEST_CASE("communication counters are exact") {
  Rng data_rng(7);
  auto synth = gen_synthetic(40, 2, 1.0, data_rng);
  auto cfg = base_config(8, 123, 0.0001);
  cfg.mode = FixedKMode{3};
  const auto result = run(cfg, synth.data, LinRegProblem{}, LinearModel(2));
  REQUIRE(result.trace.back().download_units == 3ull * 123);
  REQUIRE(result.trace.back().upload_units == 8ull * 123);
  for (std::size_t j = 0; j < result.trace.size(); ++j) {
    REQUIRE(result.trace[j].download_units == 3ull * (j + 1));
    REQUIRE(result.trace[j].upload_units == 8ull * (j + 1));
  }
}

TEST_CASE("traces are deterministic and wall clock follows the sampled order statistics") {
  Rng data_rng(11);
  auto synth = gen_synthetic(30, 2, 1.0, data_rng);
  auto cfg = base_config(6, 40, 0.0005);
  cfg.mode = FixedKMode{2};
  cfg.seed = 5;

  const auto a = run(cfg, synth.data, LinRegProblem{}, LinearModel(2));
  const auto b = run(cfg, synth.data, LinRegProblem{}, LinearModel(2));
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t j = 0; j < a.trace.size(); ++j) {
    REQUIRE(a.trace[j].wall_clock == b.trace[j].wall_clock);
    REQUIRE(a.trace[j].loss == b.trace[j].loss);
    REQUIRE(a.trace[j].k_used == b.trace[j].k_used);
  }

  // replay the engine's sampling loop: n draws per iteration, worker order
  Rng replay(5);
  double clock = 0.0;
  for (std::size_t j = 0; j < 40; ++j) {
    const auto times = sample_response_times(cfg.straggler, cfg.n, replay);
    clock += kth_smallest(times, 2);
    REQUIRE(a.trace[j].wall_clock == clock);
  }
}

TEST_CASE("trace invariants hold on a stochastic run") {
  Rng data_rng(3);
  auto synth = gen_synthetic(60, 4, 1.0, data_rng);
  auto cfg = base_config(12, 200, 0.0002);
  cfg.mode = FixedKMode{5};
  cfg.loss_eval_cadence = 7;
  const auto result = run(cfg, synth.data, LinRegProblem{}, LinearModel(4));

  double prev_clock = 0.0;
  std::uint64_t prev_down = 0;
  std::uint64_t prev_up = 0;
  for (const auto& rec : result.trace) {
    REQUIRE(rec.wall_clock > prev_clock);
    REQUIRE(rec.download_units >= prev_down);
    REQUIRE(rec.upload_units >= prev_up);
    prev_clock = rec.wall_clock;
    prev_down = rec.download_units;
    prev_up = rec.upload_units;
  }
  REQUIRE(result.trace.back().loss.has_value());  // final iteration always logged
  REQUIRE(result.trace.front().loss.has_value()); // cadence starts at iteration 1
  REQUIRE_FALSE(result.trace[1].loss.has_value());
}

TEST_CASE("noiseless regression with k = n converges to near-zero loss") {
  Rng data_rng(31);
  auto synth = gen_synthetic(12, 2, 0.0, data_rng);
  auto cfg = base_config(4, 3000, 0.005);
  const auto result = run(cfg, synth.data, LinRegProblem{}, LinearModel(2));
  const double initial = *result.trace.front().loss;
  const double final_loss = *result.trace.back().loss;
  REQUIRE(final_loss < 1e-6 * initial);
}

TEST_CASE("adaptive mode: k is non-decreasing and the switch lands on the next iteration") {
  Rng data_rng(13);
  auto synth = gen_synthetic(50, 3, 1.0, data_rng);

  ExperimentConfig cfg;
  ControllerConfig ctrl;
  ctrl.step = 2;
  ctrl.thresh = 3;
  ctrl.burnin = 5;
  ctrl.k_init = 1;
  ctrl.k_max = 9;
  cfg.mode = AdaptiveMode{ctrl};
  cfg.eta = 0.004;
  cfg.iterations = 600;
  cfg.straggler = ResponseDistribution::exponential(1.0);
  cfg.n = 10;
  cfg.seed = 77;
  cfg.loss_eval_cadence = 50;

  const auto result = run(cfg, synth.data, LinRegProblem{}, LinearModel(3));
  int prev_k = 0;
  for (const auto& rec : result.trace) {
    REQUIRE(rec.k_used >= prev_k);
    REQUIRE(rec.k_used <= ctrl.k_max);
    prev_k = rec.k_used;
  }
  REQUIRE(result.trace.front().k_used == 1);
  REQUIRE(result.trace.back().k_used > 1);  // stationarity was reached and detected
}

TEST_CASE("time and communication to target") {
  std::vector<TraceRecord> trace;
  for (int j = 1; j <= 5; ++j) {
    TraceRecord rec;
    rec.iteration = static_cast<std::size_t>(j);
    rec.wall_clock = j * 2.0;
    rec.k_used = 10;
    rec.download_units = static_cast<std::uint64_t>(10 * j);
    rec.upload_units = static_cast<std::uint64_t>(20 * j);
    rec.loss = 100.0 / j;  // 100, 50, 33.3, 25, 20
    trace.push_back(rec);
  }

  SECTION("target above the initial loss hits the first record") {
    REQUIRE(*time_to_target(trace, 150.0) == 2.0);
  }
  SECTION("unreachable target") {
    REQUIRE_FALSE(time_to_target(trace, 0.0).has_value());
    REQUIRE_FALSE(comm_to_target(trace, 0.0).has_value());
  }
  SECTION("known crossing") {
    REQUIRE(*time_to_target(trace, 30.0) == 8.0);
    const auto comm = comm_to_target(trace, 30.0);
    REQUIRE(comm->download == 40);
    REQUIRE(comm->total == 40 + 80);
  }
  SECTION("records without loss are skipped") {
    trace[1].loss.reset();
    REQUIRE(*time_to_target(trace, 60.0) == 6.0);  // record 2 skipped, record 3 hits
  }
  SECTION("empty trace is an error") {
    REQUIRE_THROWS_AS(time_to_target({}, 1.0), std::invalid_argument);
  }
}

TEST_CASE("config validation rejects inconsistent setups") {
  DataSet data(10, 2);
  for (std::size_t l = 0; l < 10; ++l) data.labels[l] = 0.0;

  auto cfg = base_config(5, 10, 0.1);
  cfg.mode = FixedKMode{6};
  REQUIRE_THROWS_AS(cfg.validate(data), std::invalid_argument);

  cfg = base_config(3, 10, 0.1);  // 3 does not divide 10
  REQUIRE_THROWS_AS(cfg.validate(data), std::invalid_argument);

  cfg = base_config(5, 10, 0.1);
  cfg.loss.reg = 0.5;  // linreg takes no regularizer
  REQUIRE_THROWS_AS(cfg.validate(data), std::invalid_argument);

  cfg = base_config(5, 10, 0.1);
  REQUIRE_NOTHROW(cfg.validate(data));
}
