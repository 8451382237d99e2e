// Copyright (c) 2026 The fastk authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "fastk/rng.hpp"

namespace fastk {

/// Per-iteration worker response-time model. The exponential family is the
/// one used throughout; the constant kind gives every worker the same
/// deterministic time (degenerate straggler-free runs).
struct ResponseDistribution {
  enum class Kind { exponential, constant };

  Kind kind = Kind::exponential;
  double rate = 1.0;  // exponential rate, or the fixed time for `constant`

  static ResponseDistribution exponential(double rate) {
    if (rate <= 0.0) throw std::invalid_argument("ResponseDistribution: rate must be positive");
    return {Kind::exponential, rate};
  }
  static ResponseDistribution constant(double value) {
    if (value <= 0.0) throw std::invalid_argument("ResponseDistribution: time must be positive");
    return {Kind::constant, value};
  }
};

/// n iid response-time draws, worker order 0..n-1; deterministic given the
/// generator state.
inline std::vector<double> sample_response_times(const ResponseDistribution& dist,
                                                 std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_response_times: n must be >= 1");
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i) {
    times[i] = dist.kind == ResponseDistribution::Kind::exponential
                   ? rng.exponential(dist.rate)
                   : dist.rate;
  }
  return times;
}

/// k-th smallest value (selection by value; duplicates count separately).
inline double kth_smallest(const std::vector<double>& times, std::size_t k) {
  if (k < 1 || k > times.size()) throw std::invalid_argument("kth_smallest: k out of range");
  std::vector<double> sorted(times);
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  return sorted[k - 1];
}

/// Indices of the k smallest times, ties broken by lowest index. Returned in
/// ascending index order so downstream aggregation is order-stable.
inline std::vector<std::size_t> fastest_k_indices(const std::vector<double>& times,
                                                  std::size_t k) {
  if (k < 1 || k > times.size()) throw std::invalid_argument("fastest_k_indices: k out of range");
  std::vector<std::size_t> idx(times.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (times[a] != times[b]) return times[a] < times[b];
                      return a < b;
                    });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

/// E[X_(k)] of n iid exp(rate) variables: (1/rate) * sum_{i=n-k+1}^{n} 1/i.
inline double order_stat_mean(std::size_t n, std::size_t k, double rate) {
  if (k < 1 || k > n) throw std::invalid_argument("order_stat_mean: k out of range");
  if (rate <= 0.0) throw std::invalid_argument("order_stat_mean: rate must be positive");
  double sum = 0.0;
  for (std::size_t i = n - k + 1; i <= n; ++i) sum += 1.0 / static_cast<double>(i);
  return sum / rate;
}

/// Var[X_(k)] of n iid exp(rate) variables: (1/rate^2) * sum_{i=n-k+1}^{n} 1/i^2.
/// Follows from X_(k) being a sum of independent exponential spacings with
/// rates (n-i+1)*rate.
inline double order_stat_variance(std::size_t n, std::size_t k, double rate) {
  if (k < 1 || k > n) throw std::invalid_argument("order_stat_variance: k out of range");
  if (rate <= 0.0) throw std::invalid_argument("order_stat_variance: rate must be positive");
  double sum = 0.0;
  for (std::size_t i = n - k + 1; i <= n; ++i) {
    const double di = static_cast<double>(i);
    sum += 1.0 / (di * di);
  }
  return sum / (rate * rate);
}

}  // namespace fastk
