// Copyright (c) 2026 The fastk authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fastk {

inline constexpr std::size_t kNumClasses = 10;

/// Flat vector of partial derivatives matching a model's parameter count.
/// For LogisticModel the layout is W row-major (class 0 first) then the
/// bias vector.
struct Gradient {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

inline double dot(const Gradient& a, const Gradient& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: gradient length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a.values[i] * b.values[i];
  return acc;
}

/// Weight vector for least-squares regression.
struct LinearModel {
  std::vector<double> w;

  explicit LinearModel(std::size_t d = 0) : w(d, 0.0) {}

  std::size_t param_count() const { return w.size(); }
  std::span<double> params() { return w; }
  std::span<const double> params() const { return w; }
};

/// Ten weight vectors (one per digit class) plus a bias vector, stored as
/// one flat parameter block: W row-major, then b. Gradients use the same
/// layout.
struct LogisticModel {
  std::size_t d = 0;
  std::vector<double> theta;  // kNumClasses * d weights, then kNumClasses biases

  explicit LogisticModel(std::size_t dim = 0)
      : d(dim), theta(kNumClasses * dim + kNumClasses, 0.0) {}

  std::size_t param_count() const { return theta.size(); }
  std::span<double> params() { return theta; }
  std::span<const double> params() const { return theta; }

  std::span<const double> weights(std::size_t cls) const {
    return {theta.data() + cls * d, d};
  }
  std::span<double> weights(std::size_t cls) {
    return {theta.data() + cls * d, d};
  }
  double bias(std::size_t cls) const { return theta[kNumClasses * d + cls]; }
  double& bias(std::size_t cls) { return theta[kNumClasses * d + cls]; }
};

/// w <- w - eta * g
template <typename Model>
void apply_update(Model& model, const Gradient& g, double eta) {
  if (eta <= 0.0) throw std::invalid_argument("apply_update: eta must be positive");
  auto p = model.params();
  if (p.size() != g.size()) throw std::invalid_argument("apply_update: gradient length mismatch");
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= eta * g.values[i];
}

}  // namespace fastk
