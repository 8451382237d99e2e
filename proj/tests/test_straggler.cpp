#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fastk/straggler.hpp"

using namespace fastk;

TEST_CASE("sampling is deterministic for a fixed seed") {
  const auto dist = ResponseDistribution::exponential(0.5);
  Rng a(99);
  Rng b(99);
  const auto ta = sample_response_times(dist, 16, a);
  const auto tb = sample_response_times(dist, 16, b);
  REQUIRE(ta == tb);
  for (double t : ta) REQUIRE(t > 0.0);
}

TEST_CASE("exponential sample mean matches 1/rate") {
  const int draws = 100000;
  SECTION("rate 1") {
    Rng rng(123);
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) sum += rng.exponential(1.0);
    const double mean = sum / draws;
    REQUIRE(std::abs(mean - 1.0) <= 3.0 / std::sqrt(double(draws)));
  }
  SECTION("rate 1/50") {
    Rng rng(124);
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) sum += rng.exponential(1.0 / 50.0);
    const double mean = sum / draws;
    REQUIRE(std::abs(mean - 50.0) <= 3.0 * 50.0 / std::sqrt(double(draws)));
  }
}

TEST_CASE("kth_smallest selects by value") {
  const std::vector<double> times{3, 1, 2};
  REQUIRE(kth_smallest(times, 1) == 1.0);
  REQUIRE(kth_smallest(times, 2) == 2.0);
  REQUIRE(kth_smallest(times, 3) == 3.0);
  REQUIRE(kth_smallest({5, 5, 2}, 2) == 5.0);
  REQUIRE_THROWS_AS(kth_smallest(times, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(kth_smallest(times, 4), std::invalid_argument);
}

TEST_CASE("fastest_k_indices picks the k smallest, ties to the lowest index") {
  REQUIRE(fastest_k_indices({3, 1, 2}, 2) == std::vector<std::size_t>{1, 2});
  REQUIRE(fastest_k_indices({4, 4, 4}, 2) == std::vector<std::size_t>{0, 1});
  REQUIRE_THROWS_AS(fastest_k_indices({1, 2}, 3), std::invalid_argument);

  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 9));
    const std::size_t k = static_cast<std::size_t>(rng.uniform_int(1, static_cast<int>(n)));
    const auto times = sample_response_times(ResponseDistribution::exponential(1.0), n, rng);
    const auto idx = fastest_k_indices(times, k);
    REQUIRE(idx.size() == k);
    for (auto i : idx) REQUIRE(i < n);
    // the slowest selected worker defines the iteration duration
    double max_selected = 0.0;
    for (auto i : idx) max_selected = std::max(max_selected, times[i]);
    REQUIRE(max_selected == kth_smallest(times, k));
  }
}

TEST_CASE("each worker is selected with frequency k/n under iid times") {
  const std::size_t n = 5;
  const std::size_t k = 2;
  const int iters = 100000;
  Rng rng(31);
  std::vector<int> hits(n, 0);
  for (int j = 0; j < iters; ++j) {
    const auto times = sample_response_times(ResponseDistribution::exponential(2.0), n, rng);
    for (auto i : fastest_k_indices(times, k)) ++hits[i];
  }
  const double p = double(k) / double(n);
  const double se = std::sqrt(p * (1.0 - p) / iters);
  for (std::size_t i = 0; i < n; ++i) {
    REQUIRE(std::abs(hits[i] / double(iters) - p) <= 3.0 * se);
  }
}

TEST_CASE("order statistic mean, closed form") {
  REQUIRE(order_stat_mean(1, 1, 1.0) == Catch::Approx(1.0));
  REQUIRE(order_stat_mean(5, 1, 0.2) == Catch::Approx(1.0));
  const double h5 = 1.0 + 0.5 + 1.0 / 3.0 + 0.25 + 0.2;
  REQUIRE(order_stat_mean(5, 5, 0.2) == Catch::Approx(5.0 * h5));
  REQUIRE_THROWS_AS(order_stat_mean(5, 0, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(order_stat_mean(5, 6, 1.0), std::invalid_argument);

  SECTION("k = n gives the harmonic number over the rate") {
    for (std::size_t n = 1; n <= 8; ++n) {
      double harmonic = 0.0;
      for (std::size_t i = 1; i <= n; ++i) harmonic += 1.0 / double(i);
      REQUIRE(order_stat_mean(n, n, 2.5) == Catch::Approx(harmonic / 2.5));
    }
  }
  SECTION("strictly increasing in k") {
    for (std::size_t n = 2; n <= 8; ++n) {
      for (std::size_t k = 1; k < n; ++k) {
        REQUIRE(order_stat_mean(n, k + 1, 0.7) > order_stat_mean(n, k, 0.7));
      }
    }
  }
}

TEST_CASE("order statistic variance, closed form") {
  REQUIRE(order_stat_variance(1, 1, 1.0) == Catch::Approx(1.0));
  REQUIRE(order_stat_variance(5, 1, 1.0) == Catch::Approx(0.04));
}

TEST_CASE("Monte Carlo order statistics agree with the closed forms") {
  // Smaller-sample version of the acceptance check, all k for two n.
  const int draws = 100000;
  for (std::size_t n : {3, 6}) {
    Rng rng(700 + n);
    const double rate = 0.8;
    std::vector<double> sum(n, 0.0);
    std::vector<double> sum2(n, 0.0);
    for (int it = 0; it < draws; ++it) {
      auto times = sample_response_times(ResponseDistribution::exponential(rate), n, rng);
      std::sort(times.begin(), times.end());
      for (std::size_t k = 1; k <= n; ++k) {
        sum[k - 1] += times[k - 1];
        sum2[k - 1] += times[k - 1] * times[k - 1];
      }
    }
    for (std::size_t k = 1; k <= n; ++k) {
      const double mean = sum[k - 1] / draws;
      const double var = sum2[k - 1] / draws - mean * mean;
      const double se_mean = std::sqrt(var / draws);
      REQUIRE(std::abs(mean - order_stat_mean(n, k, rate)) <= 4.0 * se_mean);
      REQUIRE(var == Catch::Approx(order_stat_variance(n, k, rate)).epsilon(0.05));
    }
  }
}

TEST_CASE("constant response times") {
  const auto dist = ResponseDistribution::constant(2.5);
  Rng rng(1);
  const auto times = sample_response_times(dist, 4, rng);
  for (double t : times) REQUIRE(t == 2.5);
  REQUIRE_THROWS_AS(ResponseDistribution::constant(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(ResponseDistribution::exponential(-1.0), std::invalid_argument);
}
