// Copyright (c) 2026 The fastk authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "fastk/dataset.hpp"
#include "fastk/rng.hpp"

namespace fastk {

struct SyntheticRegression {
  DataSet data;
  std::vector<double> planted_w;
};

/// Synthetic linear-regression instance: integer features uniform on
/// {1..10}, a planted weight vector with integer entries uniform on
/// {1..100}, and labels y = <x, w> + Normal(0, noise_sd^2).
inline SyntheticRegression gen_synthetic(std::size_t m, std::size_t d, double noise_sd,
                                         Rng& rng) {
  SyntheticRegression out;
  out.data = DataSet(m, d);
  out.planted_w.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    out.planted_w[i] = static_cast<double>(rng.uniform_int(1, 100));
  }
  for (std::size_t l = 0; l < m; ++l) {
    auto row = out.data.row(l);
    double mean = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      row[i] = static_cast<double>(rng.uniform_int(1, 10));
      mean += row[i] * out.planted_w[i];
    }
    out.data.labels[l] = noise_sd > 0.0 ? rng.normal(mean, noise_sd) : mean;
  }
  return out;
}

}  // namespace fastk
