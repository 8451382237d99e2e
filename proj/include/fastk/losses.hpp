// Copyright (c) 2026 The fastk authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "fastk/dataset.hpp"
#include "fastk/models.hpp"

namespace fastk {

namespace detail {

inline double dot_row(std::span<const double> x, std::span<const double> w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * w[i];
  return acc;
}

/// log(1 + e^z) without overflow.
inline double softplus(double z) {
  if (z > 30.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline std::size_t class_label(double label) {
  const auto cls = static_cast<long long>(label);
  if (static_cast<double>(cls) != label || cls < 0 || cls >= static_cast<long long>(kNumClasses)) {
    throw std::invalid_argument("logreg: label out of range {0..9}");
  }
  return static_cast<std::size_t>(cls);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Least-squares regression:  F(w) = sum_l 1/2 (<x_l, w> - y_l)^2
// ---------------------------------------------------------------------------

inline double linreg_loss(const DataSet& data, const LinearModel& model) {
  if (model.w.size() != data.d) throw std::invalid_argument("linreg_loss: dimension mismatch");
  double total = 0.0;
  for (std::size_t l = 0; l < data.m; ++l) {
    const double r = detail::dot_row(data.row(l), model.w) - data.labels[l];
    total += 0.5 * r * r;
  }
  return total;
}

/// Mean per-row gradient over [range.begin, range.end):
///   (1/s) sum_l (<x_l, w> - y_l) x_l
inline Gradient linreg_partial_gradient(const DataSet& data, const RowRange& range,
                                        const LinearModel& model) {
  if (model.w.size() != data.d) throw std::invalid_argument("linreg_partial_gradient: dimension mismatch");
  if (range.size() == 0 || range.end > data.m) {
    throw std::invalid_argument("linreg_partial_gradient: empty or out-of-bounds subset");
  }
  Gradient g;
  g.values.assign(data.d, 0.0);
  for (std::size_t l = range.begin; l < range.end; ++l) {
    const auto x = data.row(l);
    const double r = detail::dot_row(x, model.w) - data.labels[l];
    for (std::size_t i = 0; i < data.d; ++i) g.values[i] += r * x[i];
  }
  const double inv_s = 1.0 / static_cast<double>(range.size());
  for (double& v : g.values) v *= inv_s;
  return g;
}

inline Gradient linreg_partial_gradient(const DataSet& subset, const LinearModel& model) {
  return linreg_partial_gradient(subset, RowRange{0, subset.m}, model);
}

// ---------------------------------------------------------------------------
// L2-regularized multi-class logistic regression with one-vs-all encoding.
//
// Per sample and class u the margin is z = <x, w_u> + b_u with the standard
// sigmoid p = 1/(1 + e^-z); the true label should maximize p. The loss is
// binary cross-entropy averaged over the 10 classes and summed over samples,
// plus (reg/2) * ||w_u||^2 summed over classes (biases unregularized).
// ---------------------------------------------------------------------------

inline double logreg_loss(const DataSet& data, const LogisticModel& model, double reg) {
  if (model.d != data.d) throw std::invalid_argument("logreg_loss: dimension mismatch");
  if (reg < 0.0) throw std::invalid_argument("logreg_loss: reg must be nonnegative");
  double total = 0.0;
  for (std::size_t l = 0; l < data.m; ++l) {
    const std::size_t truth = detail::class_label(data.labels[l]);
    const auto x = data.row(l);
    double sample = 0.0;
    for (std::size_t u = 0; u < kNumClasses; ++u) {
      const double z = detail::dot_row(x, model.weights(u)) + model.bias(u);
      // y*(-log p) + (1-y)*(-log(1-p)) = y*softplus(-z) + (1-y)*softplus(z)
      sample += (u == truth) ? detail::softplus(-z) : detail::softplus(z);
    }
    total += sample / static_cast<double>(kNumClasses);
  }
  if (reg > 0.0) {
    double sq = 0.0;
    for (std::size_t u = 0; u < kNumClasses; ++u) {
      for (double wi : model.weights(u)) sq += wi * wi;
    }
    total += 0.5 * reg * sq;
  }
  return total;
}

/// Gradient of the per-subset mean cross-entropy plus the regularizer,
/// flattened W row-major then b.
inline Gradient logreg_partial_gradient(const DataSet& data, const RowRange& range,
                                        const LogisticModel& model, double reg) {
  if (model.d != data.d) throw std::invalid_argument("logreg_partial_gradient: dimension mismatch");
  if (reg < 0.0) throw std::invalid_argument("logreg_partial_gradient: reg must be nonnegative");
  if (range.size() == 0 || range.end > data.m) {
    throw std::invalid_argument("logreg_partial_gradient: empty or out-of-bounds subset");
  }
  Gradient g;
  g.values.assign(model.param_count(), 0.0);
  const double class_avg = 1.0 / static_cast<double>(kNumClasses);
  for (std::size_t l = range.begin; l < range.end; ++l) {
    const std::size_t truth = detail::class_label(data.labels[l]);
    const auto x = data.row(l);
    for (std::size_t u = 0; u < kNumClasses; ++u) {
      const double z = detail::dot_row(x, model.weights(u)) + model.bias(u);
      const double y = (u == truth) ? 1.0 : 0.0;
      const double coef = class_avg * (detail::sigmoid(z) - y);
      double* wg = g.values.data() + u * data.d;
      for (std::size_t i = 0; i < data.d; ++i) wg[i] += coef * x[i];
      g.values[kNumClasses * data.d + u] += coef;
    }
  }
  const double inv_s = 1.0 / static_cast<double>(range.size());
  for (double& v : g.values) v *= inv_s;
  if (reg > 0.0) {
    for (std::size_t u = 0; u < kNumClasses; ++u) {
      const auto w = model.weights(u);
      double* wg = g.values.data() + u * data.d;
      for (std::size_t i = 0; i < data.d; ++i) wg[i] += reg * w[i];
    }
  }
  return g;
}

inline Gradient logreg_partial_gradient(const DataSet& subset, const LogisticModel& model,
                                        double reg) {
  return logreg_partial_gradient(subset, RowRange{0, subset.m}, model, reg);
}

// ---------------------------------------------------------------------------
// Problem adapters used by the simulation engine.
// ---------------------------------------------------------------------------

struct LinRegProblem {
  using Model = LinearModel;

  double loss(const DataSet& data, const Model& model) const {
    return linreg_loss(data, model);
  }
  Gradient partial_gradient(const DataSet& data, const RowRange& range,
                            const Model& model) const {
    return linreg_partial_gradient(data, range, model);
  }
};

struct LogRegProblem {
  using Model = LogisticModel;
  double reg = 0.0;

  double loss(const DataSet& data, const Model& model) const {
    return logreg_loss(data, model, reg);
  }
  Gradient partial_gradient(const DataSet& data, const RowRange& range,
                            const Model& model) const {
    return logreg_partial_gradient(data, range, model, reg);
  }
};

}  // namespace fastk
