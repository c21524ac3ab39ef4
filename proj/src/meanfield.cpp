#include "lmg/meanfield.hpp"

#include <algorithm>
#include <cmath>

namespace lmg {

const char* to_string(Scheme scheme) {
  return scheme == Scheme::rk2 ? "rk2" : "rk4";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "rk2") return Scheme::rk2;
  if (name == "rk4") return Scheme::rk4;
  throw std::invalid_argument("unknown scheme '" + name +
                              "' (expected rk2 or rk4)");
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("integrator dt must be positive and finite");
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw std::invalid_argument("integrator t_end must be non-negative");
}

std::int64_t IntegratorConfig::step_count() const {
  return detail::make_step_grid(*this).n_steps();
}

namespace detail {

StepGrid make_step_grid(const IntegratorConfig& cfg) {
  StepGrid grid;
  grid.n_full = static_cast<std::int64_t>(std::floor(cfg.t_end / cfg.dt + 1e-9));
  grid.tail = cfg.t_end - static_cast<double>(grid.n_full) * cfg.dt;
  grid.has_tail = grid.tail > 1e-9 * cfg.dt;
  if (!grid.has_tail) grid.tail = 0.0;
  return grid;
}

std::vector<std::int64_t> sample_step_indices(std::span<const double> times,
                                              const IntegratorConfig& cfg,
                                              const StepGrid& grid) {
  std::vector<std::int64_t> indices;
  indices.reserve(times.size());
  const double slack = 1e-9 * std::max(1.0, cfg.t_end);
  double previous = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (!std::isfinite(t) || t < -slack || t > cfg.t_end + slack)
      throw std::invalid_argument("sample time " + std::to_string(t) +
                                  " outside [0, t_end]");
    if (i > 0 && t < previous)
      throw std::invalid_argument("sample times must be sorted");
    previous = t;

    std::int64_t idx = std::llround(t / cfg.dt);
    idx = std::clamp<std::int64_t>(idx, 0, grid.n_full);
    if (grid.has_tail &&
        t - static_cast<double>(grid.n_full) * cfg.dt > 0.5 * grid.tail)
      idx = grid.n_full + 1;
    indices.push_back(idx);
  }
  return indices;
}

void throw_nonfinite(std::int64_t step, double time) {
  throw std::runtime_error(
      "integrator produced a non-finite state at step " +
      std::to_string(step) + " (t = " + std::to_string(time) + ")");
}

}  // namespace detail

std::vector<TrajectoryPoint> integrate_trajectory(
    const SpinVector& j0, const ModelParams& params,
    const IntegratorConfig& cfg, std::span<const double> sample_times) {
  std::vector<TrajectoryPoint> points(sample_times.size());
  integrate_observed(j0, params, cfg, sample_times,
                     [&points](std::size_t i, double t, const SpinVector& j) {
                       points[i] = {t, j};
                     });
  return points;
}

}  // namespace lmg
