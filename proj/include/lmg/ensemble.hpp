#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "lmg/meanfield.hpp"
#include "lmg/rng.hpp"

namespace lmg {

/// Initial-state distribution of the stochastic ensemble: jx and jy are
/// independent Gaussians with zero mean and variance 1/(4N); jz is pinned at
/// -1/2 (it does not fluctuate).
struct SamplingSpec {
  int n_particles = 40;

  static constexpr double jz0 = -0.5;

  double sigma() const { return std::sqrt(1.0 / (4.0 * n_particles)); }
  void validate() const;
};

/// One initial condition: jx, jy ~ Normal(0, sigma^2), jz = -1/2.
SpinVector sample_initial(const SamplingSpec& spec, RandomStream& stream);

struct EnsembleConfig {
  std::int64_t n_trajectories = 100000;
  std::uint64_t master_seed = 42;
  IntegratorConfig integrator{};
  std::vector<double> sample_times;
  /// Pair every draw with its (-jx, -jy) mirror; forces the ensemble means
  /// of Jx and Jy to exact zero. Requires an even trajectory count.
  bool antithetic = false;
  /// Worker threads; 0 means hardware concurrency. Results are bitwise
  /// independent of this value.
  int n_threads = 0;

  void validate() const;
};

/// Ensemble means and dispersions at one time:
///   J_i = N * mean(j_i),  var_i = N^2 * (mean(j_i^2) - mean(j_i)^2)
/// with population (divide-by-M) moments.
struct EnsembleStats {
  double time = 0.0;
  std::array<double, 3> mean_J{};
  std::array<double, 3> var_J{};
  std::int64_t n_trajectories = 0;
  /// Ensemble mean of the per-trajectory conserved energy per particle,
  /// e = jz - chi (jx^2 - jy^2); NaN when model parameters were not in scope
  /// (the samples-only overload).
  double mean_energy = std::numeric_limits<double>::quiet_NaN();
};

struct EnsembleRun {
  std::vector<EnsembleStats> stats;  ///< one entry per sample time
  /// Worst per-trajectory drift of the two conserved scalars across the
  /// whole ensemble, measured at the sample times.
  double worst_spin_length_drift = 0.0;
  double worst_energy_drift = 0.0;
};

/// Moments of a single batch of sampled spin vectors (M >= 2 required).
EnsembleStats ensemble_stats(std::span<const SpinVector> samples,
                             int n_particles, double time = 0.0);

/// Draws n_trajectories initial states (stream index = trajectory index, or
/// pair index when antithetic), integrates each with the shared fixed-step
/// configuration, and accumulates compensated per-time moment sums.
/// Trajectories are processed in fixed-size blocks merged in block order, so
/// the result is bitwise identical for any thread count. An integrator
/// abort in any trajectory fails the run, reporting trajectory index and
/// seed for replay.
EnsembleRun run_ensemble(const ModelParams& params, const EnsembleConfig& cfg);

}  // namespace lmg
