// Copyright (c) 2026 The fastk authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "fastk/dataset.hpp"

namespace fastk {

namespace detail {

inline std::uint32_t read_be32(std::istream& in, const std::string& path) {
  unsigned char buf[4];
  if (!in.read(reinterpret_cast<char*>(buf), 4)) {
    throw std::runtime_error("idx: truncated header in " + path);
  }
  return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
         (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

inline void write_be32(std::ostream& out, std::uint32_t v) {
  const unsigned char buf[4] = {static_cast<unsigned char>(v >> 24),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(buf), 4);
}

}  // namespace detail

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

/// Load the first `limit` images of a big-endian IDX image/label file pair.
/// Images are flattened row-major and scaled to [0,1]; labels stay in
/// {0..9}.
inline DataSet load_idx(const std::string& images_path, const std::string& labels_path,
                        std::size_t limit) {
  if (limit < 1) throw std::invalid_argument("load_idx: limit must be >= 1");
  std::ifstream images(images_path, std::ios::binary);
  if (!images) throw std::runtime_error("load_idx: cannot open " + images_path);
  std::ifstream labels(labels_path, std::ios::binary);
  if (!labels) throw std::runtime_error("load_idx: cannot open " + labels_path);

  if (detail::read_be32(images, images_path) != kIdxImageMagic) {
    throw std::runtime_error("load_idx: bad image magic in " + images_path);
  }
  const std::uint32_t image_count = detail::read_be32(images, images_path);
  const std::uint32_t rows = detail::read_be32(images, images_path);
  const std::uint32_t cols = detail::read_be32(images, images_path);

  if (detail::read_be32(labels, labels_path) != kIdxLabelMagic) {
    throw std::runtime_error("load_idx: bad label magic in " + labels_path);
  }
  const std::uint32_t label_count = detail::read_be32(labels, labels_path);

  if (image_count != label_count) {
    throw std::runtime_error("load_idx: image/label count mismatch (" +
                             std::to_string(image_count) + " vs " +
                             std::to_string(label_count) + ")");
  }
  if (limit > image_count) {
    throw std::runtime_error("load_idx: requested " + std::to_string(limit) +
                             " samples but files hold " + std::to_string(image_count));
  }

  const std::size_t dim = std::size_t(rows) * cols;
  DataSet data(limit, dim);
  std::vector<unsigned char> pixel(dim);
  for (std::size_t l = 0; l < limit; ++l) {
    if (!images.read(reinterpret_cast<char*>(pixel.data()), static_cast<std::streamsize>(dim))) {
      throw std::runtime_error("idx: truncated image data in " + images_path);
    }
    auto row = data.row(l);
    for (std::size_t i = 0; i < dim; ++i) row[i] = pixel[i] / 255.0;
    char lab = 0;
    if (!labels.read(&lab, 1)) {
      throw std::runtime_error("idx: truncated label data in " + labels_path);
    }
    data.labels[l] = static_cast<double>(static_cast<unsigned char>(lab));
  }
  return data;
}

/// Write an IDX image/label pair (pixels expected in [0,1], labels in
/// {0..9}). Used to build small fixtures.
inline void write_idx(const DataSet& data, std::size_t rows, std::size_t cols,
                      const std::string& images_path, const std::string& labels_path) {
  data.validate();
  if (rows * cols != data.d) throw std::invalid_argument("write_idx: rows*cols != d");
  std::ofstream images(images_path, std::ios::binary);
  if (!images) throw std::runtime_error("write_idx: cannot open " + images_path);
  std::ofstream labels(labels_path, std::ios::binary);
  if (!labels) throw std::runtime_error("write_idx: cannot open " + labels_path);

  detail::write_be32(images, kIdxImageMagic);
  detail::write_be32(images, static_cast<std::uint32_t>(data.m));
  detail::write_be32(images, static_cast<std::uint32_t>(rows));
  detail::write_be32(images, static_cast<std::uint32_t>(cols));
  detail::write_be32(labels, kIdxLabelMagic);
  detail::write_be32(labels, static_cast<std::uint32_t>(data.m));

  for (std::size_t l = 0; l < data.m; ++l) {
    const auto row = data.row(l);
    for (double v : row) {
      const double clamped = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
      const auto byte = static_cast<unsigned char>(clamped * 255.0 + 0.5);
      images.put(static_cast<char>(byte));
    }
    labels.put(static_cast<char>(static_cast<unsigned char>(data.labels[l])));
  }
  if (!images || !labels) throw std::runtime_error("write_idx: write failure");
}

}  // namespace fastk
