// Copyright (c) 2026 The fastk authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>

#include "fastk/models.hpp"

namespace fastk {

/// Adaptation parameters for the phase-transition detector. `step` is an
/// additive increment in additive mode and a multiplier in multiplicative
/// mode; k never exceeds k_max.
struct ControllerConfig {
  enum class StepPolicy { additive, multiplicative };

  StepPolicy policy = StepPolicy::additive;
  int step = 1;
  int thresh = 1;
  int burnin = 0;
  int k_init = 1;
  int k_max = 1;

  void validate(int n) const {
    if (step < 1) throw std::invalid_argument("ControllerConfig: step must be positive");
    if (policy == StepPolicy::multiplicative && step < 2) {
      throw std::invalid_argument("ControllerConfig: multiplicative step must be >= 2");
    }
    if (thresh < 1) throw std::invalid_argument("ControllerConfig: thresh must be positive");
    if (burnin < 0) throw std::invalid_argument("ControllerConfig: burnin must be nonnegative");
    if (k_init < 1 || k_init > k_max || k_max > n) {
      throw std::invalid_argument("ControllerConfig: need 1 <= k_init <= k_max <= n");
    }
  }
};

/// Mutable detector state. countNegative tracks (negative - positive) signs
/// of consecutive gradient inner products; it may go arbitrarily negative.
struct ControllerState {
  int k = 1;
  int count_negative = 0;
  int count_iter = 1;
  std::optional<Gradient> prev_gradient;

  static ControllerState fresh(const ControllerConfig& cfg) {
    ControllerState st;
    st.k = cfg.k_init;
    return st;
  }
};

inline int current_k(const ControllerState& state) { return state.k; }

/// Feed one aggregated gradient. From the second observation on, compares
/// against the previous gradient: a strictly negative inner product
/// increments the counter, anything else decrements it. When the counter
/// exceeds thresh after more than burnin iterations and the stepped k stays
/// within k_max, k advances and both counters reset. Returns whether a
/// switch fired.
inline bool observe(ControllerState& state, const Gradient& g, const ControllerConfig& cfg) {
  if (state.prev_gradient) {
    if (state.prev_gradient->size() != g.size()) {
      throw std::invalid_argument("observe: gradient length mismatch");
    }
    if (dot(g, *state.prev_gradient) < 0.0) {
      ++state.count_negative;
    } else {
      --state.count_negative;
    }
  }
  bool switched = false;
  const long long next_k = cfg.policy == ControllerConfig::StepPolicy::additive
                               ? static_cast<long long>(state.k) + cfg.step
                               : static_cast<long long>(state.k) * cfg.step;
  if (state.count_negative > cfg.thresh && state.count_iter > cfg.burnin &&
      next_k <= cfg.k_max) {
    state.k = static_cast<int>(next_k);
    state.count_negative = 0;
    state.count_iter = 0;
    switched = true;
  }
  ++state.count_iter;
  state.prev_gradient = g;
  return switched;
}

}  // namespace fastk
