// Copyright (c) 2026 The fastk authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fastk {

/// Row-major feature matrix with one label per row. Labels are real values
/// for regression and integer classes in {0..9} for classification.
struct DataSet {
  std::size_t m = 0;  // rows
  std::size_t d = 0;  // feature dimension
  std::vector<double> features;  // m * d, row-major
  std::vector<double> labels;    // length m

  DataSet() = default;
  DataSet(std::size_t rows, std::size_t dim)
      : m(rows), d(dim), features(rows * dim, 0.0), labels(rows, 0.0) {
    if (rows < 1 || dim < 1) throw std::invalid_argument("DataSet: m and d must be >= 1");
  }

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * d, d};
  }
  std::span<double> row(std::size_t i) {
    return {features.data() + i * d, d};
  }

  void validate() const {
    if (m < 1 || d < 1) throw std::invalid_argument("DataSet: m and d must be >= 1");
    if (features.size() != m * d) throw std::invalid_argument("DataSet: feature storage size mismatch");
    if (labels.size() != m) throw std::invalid_argument("DataSet: label count != row count");
  }
};

/// A half-open range of dataset rows assigned to one worker.
struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

/// Equal horizontal split of a dataset into n contiguous blocks of s = m/n
/// rows. Rows are not shuffled here; shuffling is a preparation concern.
struct Partition {
  std::size_t s = 0;  // rows per worker
  std::vector<RowRange> blocks;

  std::size_t workers() const { return blocks.size(); }
  const RowRange& block(std::size_t i) const { return blocks.at(i); }
};

inline Partition partition_data(const DataSet& data, std::size_t n) {
  if (n < 1) throw std::invalid_argument("partition_data: n must be >= 1");
  if (data.m % n != 0) {
    throw std::invalid_argument("partition_data: worker count " + std::to_string(n) +
                                " does not divide row count " + std::to_string(data.m));
  }
  Partition part;
  part.s = data.m / n;
  part.blocks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    part.blocks.push_back({i * part.s, (i + 1) * part.s});
  }
  return part;
}

}  // namespace fastk
