#include "lmg/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

namespace lmg {

namespace {

// Neumaier compensated summation; value() = sum + comp. Partials merge
// deterministically by feeding both parts into the target accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }

  void merge(const CompensatedSum& other) {
    add(other.sum);
    add(other.comp);
  }

  double value() const { return sum + comp; }
};

// Moment sums for one sample time.
struct MomentAccumulator {
  CompensatedSum jx, jy, jz, jx_sq, jy_sq, jz_sq, energy;

  void add(const SpinVector& j, double e) {
    jx.add(j.jx);
    jy.add(j.jy);
    jz.add(j.jz);
    jx_sq.add(j.jx * j.jx);
    jy_sq.add(j.jy * j.jy);
    jz_sq.add(j.jz * j.jz);
    energy.add(e);
  }

  void merge(const MomentAccumulator& other) {
    jx.merge(other.jx);
    jy.merge(other.jy);
    jz.merge(other.jz);
    jx_sq.merge(other.jx_sq);
    jy_sq.merge(other.jy_sq);
    jz_sq.merge(other.jz_sq);
    energy.merge(other.energy);
  }
};

// Trajectories per deterministic merge unit. Even, so antithetic pairs never
// straddle a block boundary.
constexpr std::int64_t kBlockSize = 1024;

struct BlockResult {
  std::vector<MomentAccumulator> moments;  // one per sample time
  double worst_spin_drift = 0.0;
  double worst_energy_drift = 0.0;
  std::optional<std::string> error;
};

double population_variance(const CompensatedSum& sum,
                           const CompensatedSum& sum_sq, double count) {
  const double mean = sum.value() / count;
  // Clamps the roundoff tail: the population variance is non-negative.
  return std::max(0.0, sum_sq.value() / count - mean * mean);
}

}  // namespace

void SamplingSpec::validate() const {
  if (n_particles < 2)
    throw std::invalid_argument("sampling needs n_particles >= 2");
}

SpinVector sample_initial(const SamplingSpec& spec, RandomStream& stream) {
  spec.validate();
  const double sigma = spec.sigma();
  const double gx = stream.gaussian();
  const double gy = stream.gaussian();
  return {sigma * gx, sigma * gy, SamplingSpec::jz0};
}

void EnsembleConfig::validate() const {
  if (n_trajectories < 2)
    throw std::invalid_argument(
        "ensemble needs at least 2 trajectories (dispersions are undefined "
        "otherwise)");
  if (antithetic && n_trajectories % 2 != 0)
    throw std::invalid_argument(
        "antithetic sampling needs an even trajectory count");
  if (n_threads < 0)
    throw std::invalid_argument("n_threads must be >= 0");
  integrator.validate();
  const double slack = 1e-9 * std::max(1.0, integrator.t_end);
  double previous = 0.0;
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double t = sample_times[i];
    if (!std::isfinite(t) || t < -slack || t > integrator.t_end + slack)
      throw std::invalid_argument("sample time outside [0, t_end]");
    if (i > 0 && t < previous)
      throw std::invalid_argument("sample times must be sorted");
    previous = t;
    const double steps = t / integrator.dt;
    if (std::abs(steps - std::llround(steps)) * integrator.dt >
        1e-9 * std::max(1.0, t))
      throw std::invalid_argument(
          "sample times must lie on the integrator step grid (multiples of "
          "dt)");
  }
}

EnsembleStats ensemble_stats(std::span<const SpinVector> samples,
                             int n_particles, double time) {
  if (samples.size() < 2)
    throw std::invalid_argument("ensemble_stats needs at least 2 samples");

  MomentAccumulator acc;
  for (const SpinVector& j : samples) acc.add(j, 0.0);

  const double count = static_cast<double>(samples.size());
  const double n = n_particles;
  EnsembleStats stats;
  stats.time = time;
  stats.n_trajectories = static_cast<std::int64_t>(samples.size());
  stats.mean_J = {n * (acc.jx.value() / count), n * (acc.jy.value() / count),
                  n * (acc.jz.value() / count)};
  stats.var_J = {n * n * population_variance(acc.jx, acc.jx_sq, count),
                 n * n * population_variance(acc.jy, acc.jy_sq, count),
                 n * n * population_variance(acc.jz, acc.jz_sq, count)};
  return stats;
}

EnsembleRun run_ensemble(const ModelParams& params, const EnsembleConfig& cfg) {
  params.validate();
  cfg.validate();

  const SamplingSpec spec{params.n_particles};
  const std::int64_t n_traj = cfg.n_trajectories;
  const std::int64_t n_blocks = (n_traj + kBlockSize - 1) / kBlockSize;
  const std::size_t n_times = cfg.sample_times.size();

  std::vector<BlockResult> blocks(static_cast<std::size_t>(n_blocks));
  std::atomic<std::int64_t> next_block{0};

  auto initial_for = [&](std::int64_t lambda) {
    if (!cfg.antithetic) {
      RandomStream stream(cfg.master_seed, static_cast<std::uint64_t>(lambda));
      return sample_initial(spec, stream);
    }
    RandomStream stream(cfg.master_seed,
                        static_cast<std::uint64_t>(lambda / 2));
    SpinVector j = sample_initial(spec, stream);
    if (lambda % 2 != 0) {
      j.jx = -j.jx;
      j.jy = -j.jy;
    }
    return j;
  };

  auto worker = [&]() {
    for (std::int64_t b = next_block.fetch_add(1); b < n_blocks;
         b = next_block.fetch_add(1)) {
      BlockResult& block = blocks[static_cast<std::size_t>(b)];
      block.moments.assign(n_times, MomentAccumulator{});
      const std::int64_t begin = b * kBlockSize;
      const std::int64_t end = std::min(n_traj, begin + kBlockSize);
      for (std::int64_t lambda = begin; lambda < end; ++lambda) {
        const SpinVector j0 = initial_for(lambda);
        const Conserved c0 = mf_conserved(j0, params);
        try {
          integrate_observed(
              j0, params, cfg.integrator, cfg.sample_times,
              [&](std::size_t s, double, const SpinVector& j) {
                const Conserved c = mf_conserved(j, params);
                block.moments[s].add(j, c.energy_per_particle);
                block.worst_spin_drift =
                    std::max(block.worst_spin_drift,
                             std::abs(c.spin_length_sq - c0.spin_length_sq));
                block.worst_energy_drift = std::max(
                    block.worst_energy_drift,
                    std::abs(c.energy_per_particle - c0.energy_per_particle));
              });
        } catch (const std::exception& e) {
          block.error = "trajectory " + std::to_string(lambda) +
                        " (master_seed " + std::to_string(cfg.master_seed) +
                        "): " + e.what();
          return;
        }
      }
    }
  };

  int n_threads = cfg.n_threads > 0
                      ? cfg.n_threads
                      : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<int>(
      std::min<std::int64_t>(n_threads, n_blocks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  EnsembleRun run;
  // Merge in block-index order: the totals are bitwise independent of which
  // thread computed which block.
  std::vector<MomentAccumulator> totals(n_times);
  for (const BlockResult& block : blocks) {
    if (block.error)
      throw std::runtime_error("ensemble run failed at " + *block.error);
    for (std::size_t s = 0; s < n_times; ++s)
      totals[s].merge(block.moments[s]);
    run.worst_spin_length_drift =
        std::max(run.worst_spin_length_drift, block.worst_spin_drift);
    run.worst_energy_drift =
        std::max(run.worst_energy_drift, block.worst_energy_drift);
  }

  const double count = static_cast<double>(n_traj);
  const double n = params.n_particles;
  run.stats.resize(n_times);
  for (std::size_t s = 0; s < n_times; ++s) {
    EnsembleStats& stats = run.stats[s];
    const MomentAccumulator& acc = totals[s];
    stats.time = cfg.sample_times[s];
    stats.n_trajectories = n_traj;
    stats.mean_J = {n * (acc.jx.value() / count),
                    n * (acc.jy.value() / count),
                    n * (acc.jz.value() / count)};
    stats.var_J = {n * n * population_variance(acc.jx, acc.jx_sq, count),
                   n * n * population_variance(acc.jy, acc.jy_sq, count),
                   n * n * population_variance(acc.jz, acc.jz_sq, count)};
    stats.mean_energy = acc.energy.value() / count;
  }
  return run;
}

}  // namespace lmg
