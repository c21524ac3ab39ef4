#include "lmg/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lmg {

void ModelParams::validate() const {
  if (n_particles < 2)
    throw std::invalid_argument("n_particles must be at least 2, got " +
                                std::to_string(n_particles));
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("epsilon must be positive and finite");
  if (!std::isfinite(chi))
    throw std::invalid_argument("chi must be finite");
}

double hf_energy(double alpha, double phi, const ModelParams& params) {
  params.validate();
  const double s = std::sin(2.0 * alpha);
  return -0.5 * params.epsilon * params.n_particles *
         (std::cos(2.0 * alpha) +
          0.5 * params.chi * s * s * std::cos(2.0 * phi));
}

HfPoint hf_minimize(const ModelParams& params) {
  params.validate();
  // Stationarity of the surface in closed form: the symmetric point alpha=0
  // is the minimum for |chi| <= 1; beyond that the wells sit at
  // cos 2alpha = 1/|chi|, in the phi=0 plane for chi > 1 and the phi=pi/2
  // plane for chi < -1 (where cos 2phi = -1 flips the sign of the coupling
  // term).
  double alpha = 0.0;
  double phi = 0.0;
  if (params.chi > 1.0) {
    alpha = 0.5 * std::acos(1.0 / params.chi);
  } else if (params.chi < -1.0) {
    alpha = 0.5 * std::acos(-1.0 / params.chi);
    phi = 2.0 * std::atan(1.0);  // pi/2
  }
  return {alpha, phi, hf_energy(alpha, phi, params)};
}

std::vector<HfPoint> landscape_scan(const ModelParams& params, double alpha_min,
                                    double alpha_max, int n_points,
                                    double phi) {
  params.validate();
  if (n_points < 2)
    throw std::invalid_argument("landscape_scan needs n_points >= 2, got " +
                                std::to_string(n_points));
  if (!(alpha_min < alpha_max))
    throw std::invalid_argument("landscape_scan needs alpha_min < alpha_max");

  std::vector<HfPoint> points;
  points.reserve(static_cast<std::size_t>(n_points));
  const double step = (alpha_max - alpha_min) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double alpha =
        (i == n_points - 1) ? alpha_max : alpha_min + i * step;
    points.push_back({alpha, phi, hf_energy(alpha, phi, params)});
  }
  return points;
}

}  // namespace lmg
