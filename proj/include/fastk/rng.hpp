// Copyright (c) 2026 The fastk authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fastk {

/// Seedable pseudorandom generator with portable output.
///
/// Wraps std::mt19937_64 but derives all floating-point variates through
/// fixed bit manipulation and inverse-CDF / Box-Muller transforms, so a
/// given seed produces the same stream on every platform and standard
/// library. One Rng instance per simulation run or replication.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double strictly inside (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  /// Exponential variate with the given rate; strictly positive.
  double exponential(double rate) { return -std::log1p(-uniform_open()) / rate; }

  /// Gaussian variate via Box-Muller.
  double normal(double mean, double sd) {
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double theta = 2.0 * 3.14159265358979323846 * uniform();
    return mean + sd * r * std::cos(theta);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fastk
