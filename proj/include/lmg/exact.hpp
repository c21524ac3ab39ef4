#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <span>
#include <vector>

#include "lmg/model.hpp"

namespace lmg {

/// |j, m> basis of the maximal quasi-spin multiplet j = N/2. States are
/// ordered by increasing m = -j, -j+1, ..., +j (dimension N+1); the
/// dynamics from |j,-j> never leaves this multiplet.
struct SpinMultipletBasis {
  int n_particles = 0;

  double j() const { return 0.5 * n_particles; }
  int dim() const { return n_particles + 1; }
  double m_value(int index) const { return index - j(); }

  void validate() const;
};

/// Dense Hermitian operator on a SpinMultipletBasis. Jx, Jz and H are purely
/// real symmetric; Jy is purely imaginary off the diagonal.
struct OperatorMatrix {
  SpinMultipletBasis basis;
  Eigen::MatrixXcd entries;
};

/// The three quasi-spin components plus their squares. The squares are
/// assembled from closed-form matrix elements (their diagonals are
/// polynomial in j and m) instead of matrix products, so the t=0 moments
/// of |j,-j> -- dispersions N/4, N/4, 0 -- come out exact in floating
/// point, not just to roundoff.
struct SpinOperators {
  OperatorMatrix jx, jy, jz;
  OperatorMatrix jx_sq, jy_sq, jz_sq;
};

struct QuantumState {
  SpinMultipletBasis basis;
  Eigen::VectorXcd amplitudes;

  double norm() const { return amplitudes.norm(); }
};

/// Means, dispersions and energy of one state at one time.
struct ExactObservables {
  double time = 0.0;
  std::array<double, 3> mean_J{};  ///< <Jx>, <Jy>, <Jz>
  std::array<double, 3> var_J{};   ///< <Ji^2> - <Ji>^2
  double energy = 0.0;             ///< <H> in epsilon units
};

/// Jz diagonal with entries m; ladder elements
/// <j,m+1|J+|j,m> = sqrt(j(j+1) - m(m+1)); Jx = (J+ + J-)/2,
/// Jy = (J+ - J-)/(2i).
SpinOperators build_spin_matrices(const SpinMultipletBasis& basis);

/// H = eps Jz - V (Jx^2 - Jy^2) = eps Jz - (V/2)(J+^2 + J-^2) with
/// V = chi eps/(N-1). Real symmetric, pentadiagonal with exactly zero
/// first off-diagonals (J+-^2 shifts m by 2).
OperatorMatrix build_hamiltonian(const ModelParams& params,
                                 const SpinMultipletBasis& basis);

/// |j,-j>: amplitude 1 on m = -j. The paper's initial state.
QuantumState lowest_weight_state(const SpinMultipletBasis& basis);

/// Spectral propagation psi(t) = sum_k exp(-i E_k t) <k|psi0> |k> via full
/// eigendecomposition; no time-step error. The decomposition is performed
/// per connected component of the exact sparsity pattern of H, so basis
/// amplitudes in components the initial state does not touch stay bitwise
/// zero (for the model Hamiltonian these components are the two m-parity
/// blocks). Requires a normalized state and Hermitian H; throws
/// std::runtime_error if the eigensolver fails its residual check or an
/// output loses normalization beyond 1e-12.
std::vector<QuantumState> evolve_exact(const QuantumState& state0,
                                       const OperatorMatrix& hamiltonian,
                                       std::span<const double> times);

/// <Ji>, dispersions via <Ji^2> - <Ji>^2, and <H> for one state.
ExactObservables exact_observables(const QuantumState& state,
                                   const SpinOperators& ops,
                                   const OperatorMatrix& hamiltonian,
                                   double time = 0.0);

/// Pipeline: build basis and matrices for `params`, propagate |j,-j>, and
/// evaluate observables at each requested time.
std::vector<ExactObservables> exact_timeseries(const ModelParams& params,
                                               std::span<const double> times);

}  // namespace lmg
