#pragma once

#include <vector>

namespace lmg {

/// Parameters of the two-level collective-spin model: N particles spread
/// over two N-fold degenerate shells split by `epsilon`, interacting with
/// dimensionless strength `chi`. The two-body matrix element is derived:
/// V = chi * epsilon / (N - 1).
struct ModelParams {
  int n_particles = 40;
  double epsilon = 1.0;  ///< energy scale; times are measured in hbar/epsilon
  double chi = 0.5;

  double coupling() const { return chi * epsilon / (n_particles - 1); }

  /// Throws std::invalid_argument if n_particles < 2, epsilon <= 0, or any
  /// field is non-finite. Negative chi is accepted (it is meaningful but
  /// outside the validated regime).
  void validate() const;
};

/// One point of the trial-state energy surface.
struct HfPoint {
  double alpha = 0.0;
  double phi = 0.0;
  double energy = 0.0;  ///< in units of epsilon
};

/// Variational energy of the rotated product state:
///   E(alpha, phi) = -(eps N / 2) [cos 2a + (chi/2) sin^2 2a cos 2phi].
/// Total function of real angles; even in alpha and pi-periodic in both.
double hf_energy(double alpha, double phi, const ModelParams& params);

/// Global minimizer of hf_energy with alpha in [0, pi/2], phi in [0, pi/2].
/// Symmetric phase (|chi| <= 1): alpha = 0 (phi reported as 0). Broken phase
/// chi > 1: cos 2alpha = 1/chi at phi = 0. For chi < -1 the minimum moves to
/// phi = pi/2 with cos 2alpha = -1/chi.
HfPoint hf_minimize(const ModelParams& params);

/// Uniformly spaced alpha grid at fixed phi, each point carrying hf_energy.
/// Requires n_points >= 2 and alpha_min < alpha_max.
std::vector<HfPoint> landscape_scan(const ModelParams& params, double alpha_min,
                                    double alpha_max, int n_points,
                                    double phi = 0.0);

}  // namespace lmg
