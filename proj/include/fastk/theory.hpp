// Copyright (c) 2026 The fastk authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fastk/straggler.hpp"

namespace fastk {

/// Parameters of the convergence bound for fastest-k SGD.
///
///   eta     fixed step size (eta * c < 1)
///   L       Lipschitz constant of the gradient
///   c       strong-convexity parameter
///   sigma2  variance bound on the gradient estimate
///   s       data vectors per worker
///   n       worker count
///   rate    exponential response-time rate
///   e0      initial optimality gap F(w0) - F*
///   mg      slope of the gradient-norm term in the variance condition
///   eps     probability-bound error term, in (0,1)
struct SystemParams {
  double eta = 0.0;
  double L = 0.0;
  double c = 0.0;
  double sigma2 = 0.0;
  std::size_t s = 0;
  std::size_t n = 0;
  double rate = 0.0;
  double e0 = 0.0;
  double mg = 0.0;
  double eps = 0.1;

  void validate() const {
    if (eta <= 0.0 || L <= 0.0 || c <= 0.0 || sigma2 <= 0.0 || rate <= 0.0 || e0 <= 0.0) {
      throw std::invalid_argument("SystemParams: eta, L, c, sigma2, rate, e0 must be positive");
    }
    if (s < 1 || n < 1) throw std::invalid_argument("SystemParams: s and n must be >= 1");
    if (eta * c >= 1.0) throw std::invalid_argument("SystemParams: eta * c must be < 1");
    if (mg < 0.0) throw std::invalid_argument("SystemParams: mg must be nonnegative");
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("SystemParams: eps must be in (0,1)");
  }

  /// Decay constant alpha = -ln(1 - eta*c) > 0.
  double alpha() const { return -std::log1p(-eta * c); }

  /// Mean iteration time mu_k when waiting for the fastest k of n workers.
  double mu(std::size_t k) const { return order_stat_mean(n, k, rate); }
};

/// Times at which the bound-optimal policy moves from k to k+1 workers,
/// with the bound value reached at each switch. switch_times[i] is the
/// switch from k = i+1 to k = i+2; t_0 = 0 is implicit.
struct PolicySchedule {
  std::vector<double> switch_times;
  std::vector<double> gaps_at_switch;
};

/// Stationary-phase bound eta*L*sigma2 / (2*c*k*s).
inline double error_floor(std::size_t k, const SystemParams& p) {
  if (k < 1 || k > p.n) throw std::invalid_argument("error_floor: k out of range");
  return p.eta * p.L * p.sigma2 / (2.0 * p.c * static_cast<double>(k) * static_cast<double>(p.s));
}

/// Bound on the optimality gap after j iterations (j may be fractional):
/// floor + (1 - eta*c)^j * (e0 - floor).
inline double error_bound_iterations(double j, std::size_t k, const SystemParams& p) {
  if (j < 0.0) throw std::invalid_argument("error_bound_iterations: j must be >= 0");
  const double floor = error_floor(k, p);
  return floor + std::pow(1.0 - p.eta * p.c, j) * (p.e0 - floor);
}

/// Bound on the optimality gap after wall-clock time t, with the
/// probability correction dropped: floor + exp(-alpha*t/mu_k) * (e0 - floor).
inline double error_bound_time(double t, std::size_t k, const SystemParams& p) {
  if (t < 0.0) throw std::invalid_argument("error_bound_time: t must be >= 0");
  const double floor = error_floor(k, p);
  return floor + std::exp(-p.alpha() * t / p.mu(k)) * (p.e0 - floor);
}

/// Probability with which the wall-clock bound holds at time t:
/// 1 - (sigma_k^2/eps^2) * (2/(t*mu_k) + 1/t^2), clamped below at 0.
inline double bound_probability(double t, std::size_t k, const SystemParams& p) {
  if (t <= 0.0) throw std::invalid_argument("bound_probability: t must be positive");
  const double var_k = order_stat_variance(p.n, k, p.rate);
  const double correction =
      var_k / (p.eps * p.eps) * (2.0 / (t * p.mu(k)) + 1.0 / (t * t));
  return std::max(0.0, 1.0 - correction);
}

/// Magnitude of the bound's derivative t_rel time units into a segment that
/// starts at gap `gap_at_segment_start` and waits for k workers:
/// (alpha/mu_k) * exp(-alpha*t_rel/mu_k) * (gap - floor_k).
inline double bound_rate(double t_rel, std::size_t k, double gap_at_segment_start,
                         const SystemParams& p) {
  if (t_rel < 0.0) throw std::invalid_argument("bound_rate: t_rel must be >= 0");
  const double floor = error_floor(k, p);
  if (gap_at_segment_start < floor) {
    throw std::invalid_argument("bound_rate: segment gap below the error floor");
  }
  const double mu_k = p.mu(k);
  return p.alpha() / mu_k * std::exp(-p.alpha() * t_rel / mu_k) *
         (gap_at_segment_start - floor);
}

/// Bound-optimal switch times t_1 < ... < t_{n-1}. Each step solves the
/// rate-matching condition in closed form:
///
///   t_k = t_{k-1} + (mu_k/alpha) * [ ln(mu_{k+1} - mu_k) - ln(eta*L*sigma2*mu_k)
///         + ln(2*c*k*(k+1)*s*e(t_{k-1}) - eta*L*(k+1)*sigma2) ]
///
/// with the gap e(.) propagated segment-wise. If mu_{k+1} == mu_k the switch
/// is immediate (extra workers cost no time). If the remaining gap cannot
/// exceed the next floor the policy is degenerate and an error is raised.
/// The policy is generic in the mean-iteration-time function mu(k).
template <typename MuFn>
PolicySchedule switching_times_with(const SystemParams& p, MuFn&& mu) {
  p.validate();
  if (p.n < 2) throw std::invalid_argument("switching_times: need n >= 2");
  const double alpha = p.alpha();
  const double s = static_cast<double>(p.s);

  PolicySchedule sched;
  double t_prev = 0.0;
  double gap_prev = p.e0;
  for (std::size_t k = 1; k + 1 <= p.n; ++k) {
    const double mu_k = mu(k);
    const double mu_next = mu(k + 1);
    const double kd = static_cast<double>(k);
    double t_k = t_prev;
    if (mu_next > mu_k) {
      const double gap_term =
          2.0 * p.c * kd * (kd + 1.0) * s * gap_prev - p.eta * p.L * (kd + 1.0) * p.sigma2;
      if (gap_term <= 0.0) {
        throw std::domain_error(
            "switching_times: gap at switch " + std::to_string(k) +
            " cannot fall below the next error floor (degenerate policy)");
      }
      t_k = t_prev + mu_k / alpha *
                         (std::log(mu_next - mu_k) - std::log(p.eta * p.L * p.sigma2 * mu_k) +
                          std::log(gap_term));
    }
    const double floor_k = error_floor(k, p);
    const double gap_k =
        floor_k + std::exp(-alpha * (t_k - t_prev) / mu_k) * (gap_prev - floor_k);
    sched.switch_times.push_back(t_k);
    sched.gaps_at_switch.push_back(gap_k);
    t_prev = t_k;
    gap_prev = gap_k;
  }
  return sched;
}

inline PolicySchedule switching_times(const SystemParams& p) {
  return switching_times_with(p, [&p](std::size_t k) { return p.mu(k); });
}

/// argmin over k of the fixed-k bound at time t; ties go to smaller k.
inline std::size_t best_fixed_k(double t, const SystemParams& p) {
  if (t < 0.0) throw std::invalid_argument("best_fixed_k: t must be >= 0");
  std::size_t best = 1;
  double best_value = error_bound_time(t, 1, p);
  for (std::size_t k = 2; k <= p.n; ++k) {
    const double value = error_bound_time(t, k, p);
    if (value < best_value) {
      best_value = value;
      best = k;
    }
  }
  return best;
}

/// Worker count the adaptive schedule uses at time t: 1 plus the number of
/// switch times that have passed (right-continuous staircase).
inline std::size_t adaptive_k_of_t(double t, const PolicySchedule& schedule) {
  std::size_t k = 1;
  for (double ts : schedule.switch_times) {
    if (ts <= t) ++k;
  }
  return k;
}

/// Piecewise bound of the adaptive schedule on a sorted nonnegative grid.
/// On each segment the bound decays toward the current k's floor starting
/// from the gap reached at the previous switch; continuous across switches.
inline std::vector<double> adaptive_bound_curve(const std::vector<double>& t_grid,
                                                const SystemParams& p,
                                                const PolicySchedule& schedule) {
  const double alpha = p.alpha();
  std::vector<double> curve;
  curve.reserve(t_grid.size());
  double prev_t = 0.0;
  for (double t : t_grid) {
    if (t < 0.0 || (!curve.empty() && t < prev_t)) {
      throw std::invalid_argument("adaptive_bound_curve: grid must be sorted and nonnegative");
    }
    const std::size_t k = adaptive_k_of_t(t, schedule);
    const double seg_start = k == 1 ? 0.0 : schedule.switch_times[k - 2];
    const double seg_gap = k == 1 ? p.e0 : schedule.gaps_at_switch[k - 2];
    const double floor_k = error_floor(k, p);
    curve.push_back(floor_k +
                    std::exp(-alpha * (t - seg_start) / p.mu(k)) * (seg_gap - floor_k));
    prev_t = t;
  }
  return curve;
}

inline std::vector<double> adaptive_bound_curve(const std::vector<double>& t_grid,
                                                const SystemParams& p) {
  return adaptive_bound_curve(t_grid, p, switching_times(p));
}

/// Step-size admissibility: eta <= 1 / (2L * (mg/(k*s) + 1)).
inline bool validate_step_size(std::size_t k, const SystemParams& p) {
  if (k < 1 || k > p.n) throw std::invalid_argument("validate_step_size: k out of range");
  const double limit =
      1.0 / (2.0 * p.L * (p.mg / (static_cast<double>(k) * static_cast<double>(p.s)) + 1.0));
  return p.eta <= limit;
}

}  // namespace fastk
