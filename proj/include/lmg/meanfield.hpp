#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmg/model.hpp"

namespace lmg {

/// Scaled quasi-spin expectations j_i = <J_i>/N of one mean-field
/// trajectory.
struct SpinVector {
  double jx = 0.0;
  double jy = 0.0;
  double jz = 0.0;

  bool is_finite() const {
    return std::isfinite(jx) && std::isfinite(jy) && std::isfinite(jz);
  }
};

enum class Scheme { rk2, rk4 };

const char* to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

/// Fixed-step integration window. The step count is ceil(t_end/dt); every
/// step has size dt except the last, which is shortened to land exactly on
/// t_end. Fixed stepping keeps ensemble trajectories bitwise reproducible
/// and time-grid aligned.
struct IntegratorConfig {
  Scheme scheme = Scheme::rk2;
  double dt = 0.01;      ///< hbar/epsilon units
  double t_end = 10.0;

  std::int64_t step_count() const;
  void validate() const;
};

/// Time derivative of the mean-field flow:
///   d jx/dt = eps (-jy + 2 chi jy jz)
///   d jy/dt = eps ( jx + 2 chi jx jz)
///   d jz/dt = -4 eps chi jx jy
/// (0, 0, -1/2) is a stationary point for every chi; it is a saddle of the
/// energy surface for chi > 1.
inline SpinVector mf_rhs(const SpinVector& j, const ModelParams& params) {
  const double eps = params.epsilon;
  const double chi = params.chi;
  return {eps * j.jy * (2.0 * chi * j.jz - 1.0),
          eps * j.jx * (2.0 * chi * j.jz + 1.0),
          -4.0 * eps * chi * (j.jx * j.jy)};
}

/// The two scalars conserved exactly by the flow: the squared spin length
/// jx^2+jy^2+jz^2 and the energy per particle e = jz - chi (jx^2 - jy^2).
/// Used by tests and runtime drift monitors.
struct Conserved {
  double spin_length_sq = 0.0;
  double energy_per_particle = 0.0;  ///< epsilon units
};

inline Conserved mf_conserved(const SpinVector& j, const ModelParams& params) {
  return {j.jx * j.jx + j.jy * j.jy + j.jz * j.jz,
          j.jz - params.chi * (j.jx * j.jx - j.jy * j.jy)};
}

struct TrajectoryPoint {
  double time = 0.0;
  SpinVector j;
};

namespace detail {

// Step layout of one integration window: n_full steps of exactly dt plus an
// optional shortened tail step landing on t_end. A leftover below the
// tolerance (t_end an exact multiple of dt up to roundoff) produces no tail.
struct StepGrid {
  std::int64_t n_full = 0;
  double tail = 0.0;
  bool has_tail = false;

  std::int64_t n_steps() const { return n_full + (has_tail ? 1 : 0); }
};

StepGrid make_step_grid(const IntegratorConfig& cfg);

inline SpinVector axpy(const SpinVector& a, double h, const SpinVector& b) {
  return {a.jx + h * b.jx, a.jy + h * b.jy, a.jz + h * b.jz};
}

// Heun's method: average of the slopes at both endpoints.
inline SpinVector rk2_step(const SpinVector& j, double h,
                           const ModelParams& params) {
  const SpinVector k1 = mf_rhs(j, params);
  const SpinVector k2 = mf_rhs(axpy(j, h, k1), params);
  return {j.jx + 0.5 * h * (k1.jx + k2.jx), j.jy + 0.5 * h * (k1.jy + k2.jy),
          j.jz + 0.5 * h * (k1.jz + k2.jz)};
}

inline SpinVector rk4_step(const SpinVector& j, double h,
                           const ModelParams& params) {
  const SpinVector k1 = mf_rhs(j, params);
  const SpinVector k2 = mf_rhs(axpy(j, 0.5 * h, k1), params);
  const SpinVector k3 = mf_rhs(axpy(j, 0.5 * h, k2), params);
  const SpinVector k4 = mf_rhs(axpy(j, h, k3), params);
  const double w = h / 6.0;
  return {j.jx + w * (k1.jx + 2.0 * (k2.jx + k3.jx) + k4.jx),
          j.jy + w * (k1.jy + 2.0 * (k2.jy + k3.jy) + k4.jy),
          j.jz + w * (k1.jz + 2.0 * (k2.jz + k3.jz) + k4.jz)};
}

// Maps sample times (sorted, within [0, t_end]) to indices of the step grid:
// nearest regular step, except times past the midpoint of the tail step land
// on t_end.
std::vector<std::int64_t> sample_step_indices(std::span<const double> times,
                                              const IntegratorConfig& cfg,
                                              const StepGrid& grid);

[[noreturn]] void throw_nonfinite(std::int64_t step, double time);

}  // namespace detail

/// Advances mf_rhs from j0 with the configured fixed-step scheme, invoking
/// on_sample(sample_index, time, state) as the step grid reaches each
/// requested time (times that are multiples of dt are hit exactly). A
/// non-finite state aborts with a diagnostic naming the step index.
template <class Observer>
void integrate_observed(const SpinVector& j0, const ModelParams& params,
                        const IntegratorConfig& cfg,
                        std::span<const double> sample_times,
                        Observer&& on_sample) {
  params.validate();
  cfg.validate();
  const detail::StepGrid grid = detail::make_step_grid(cfg);
  const std::vector<std::int64_t> targets =
      detail::sample_step_indices(sample_times, cfg, grid);

  const std::int64_t n_steps = grid.n_steps();
  SpinVector j = j0;
  std::size_t next = 0;
  for (std::int64_t k = 0; k <= n_steps; ++k) {
    const double t_k = (k == n_steps) ? cfg.t_end : k * cfg.dt;
    while (next < targets.size() && targets[next] == k) {
      on_sample(next, t_k, j);
      ++next;
    }
    if (k == n_steps) break;
    const double h = (grid.has_tail && k == grid.n_full) ? grid.tail : cfg.dt;
    j = (cfg.scheme == Scheme::rk2) ? detail::rk2_step(j, h, params)
                                    : detail::rk4_step(j, h, params);
    if (!j.is_finite()) detail::throw_nonfinite(k + 1, t_k + h);
  }
}

/// Convenience wrapper around integrate_observed that collects the sampled
/// states.
std::vector<TrajectoryPoint> integrate_trajectory(
    const SpinVector& j0, const ModelParams& params,
    const IntegratorConfig& cfg, std::span<const double> sample_times);

}  // namespace lmg
