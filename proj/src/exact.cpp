#include "lmg/exact.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lmg {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

// <j,m+1|J+|j,m>^2 = j(j+1) - m(m+1). All quantities are (quarter-)integers,
// exact in doubles up to N ~ 1e4.
double ladder_sq(double j, double m) { return j * (j + 1.0) - m * (m + 1.0); }

void check_dimensions(const SpinMultipletBasis& basis,
                      const Eigen::MatrixXcd& entries) {
  if (entries.rows() != basis.dim() || entries.cols() != basis.dim())
    throw std::invalid_argument("operator matrix does not match basis dimension");
}

void check_hermitian(const MatrixXcd& h) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("evolve_exact requires a Hermitian matrix");
}

// Connected components of the exact nonzero pattern. Entries that are
// exactly zero cannot couple states, so each component can be decomposed
// independently; for the model Hamiltonian this splits the two m-parity
// blocks and keeps the untouched block's amplitudes bitwise zero.
std::vector<std::vector<int>> sparsity_components(const MatrixXcd& h) {
  const int n = static_cast<int>(h.rows());
  std::vector<int> label(n, -1);
  std::vector<std::vector<int>> components;
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (label[start] >= 0) continue;
    const int id = static_cast<int>(components.size());
    components.emplace_back();
    stack.push_back(start);
    label[start] = id;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      components[id].push_back(a);
      for (int b = 0; b < n; ++b) {
        if (label[b] < 0 && (h(a, b) != complex<double>(0.0) ||
                             h(b, a) != complex<double>(0.0))) {
          label[b] = id;
          stack.push_back(b);
        }
      }
    }
  }
  return components;
}

struct BlockSpectrum {
  std::vector<int> indices;
  VectorXd eigenvalues;
  MatrixXcd eigenvectors;
};

// Dense eigendecomposition of one component, with the residual check
// ||H v - E v||_max <= 1e-10 ||H_block|| asserted afterwards. A purely real
// block goes through the real symmetric solver.
BlockSpectrum decompose_block(const MatrixXcd& h,
                              const std::vector<int>& indices) {
  const int nb = static_cast<int>(indices.size());
  MatrixXcd block(nb, nb);
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b) block(a, b) = h(indices[a], indices[b]);

  BlockSpectrum spectrum;
  spectrum.indices = indices;
  if (block.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(block.real());
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("eigendecomposition did not converge");
    spectrum.eigenvalues = solver.eigenvalues();
    spectrum.eigenvectors = solver.eigenvectors().cast<complex<double>>();
  } else {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(block);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("eigendecomposition did not converge");
    spectrum.eigenvalues = solver.eigenvalues();
    spectrum.eigenvectors = solver.eigenvectors();
  }

  const double norm = std::max(spectrum.eigenvalues.cwiseAbs().maxCoeff(), 1.0);
  const double residual =
      (block * spectrum.eigenvectors -
       spectrum.eigenvectors * spectrum.eigenvalues.asDiagonal())
          .cwiseAbs()
          .maxCoeff();
  if (residual > 1e-10 * norm)
    throw std::runtime_error("eigendecomposition residual " +
                             std::to_string(residual) +
                             " exceeds tolerance");
  return spectrum;
}

double expectation(const VectorXcd& psi, const MatrixXcd& op) {
  return std::real(psi.dot(op * psi));
}

}  // namespace

void SpinMultipletBasis::validate() const {
  if (n_particles < 1)
    throw std::invalid_argument("basis needs at least one particle");
}

SpinOperators build_spin_matrices(const SpinMultipletBasis& basis) {
  basis.validate();
  const int dim = basis.dim();
  const double j = basis.j();

  SpinOperators ops;
  for (OperatorMatrix* op : {&ops.jx, &ops.jy, &ops.jz, &ops.jx_sq, &ops.jy_sq,
                             &ops.jz_sq}) {
    op->basis = basis;
    op->entries = MatrixXcd::Zero(dim, dim);
  }

  for (int i = 0; i < dim; ++i) {
    const double m = basis.m_value(i);
    ops.jz.entries(i, i) = m;
    ops.jz_sq.entries(i, i) = m * m;
    // <m|Jx^2|m> = <m|Jy^2|m> = (j(j+1) - m^2)/2, polynomial in j and m.
    const double transverse_sq = 0.5 * (j * (j + 1.0) - m * m);
    ops.jx_sq.entries(i, i) = transverse_sq;
    ops.jy_sq.entries(i, i) = transverse_sq;

    if (i + 1 < dim) {
      const double s = std::sqrt(ladder_sq(j, m));
      ops.jx.entries(i + 1, i) = 0.5 * s;
      ops.jx.entries(i, i + 1) = 0.5 * s;
      ops.jy.entries(i + 1, i) = complex<double>(0.0, -0.5) * s;
      ops.jy.entries(i, i + 1) = complex<double>(0.0, 0.5) * s;
    }
    if (i + 2 < dim) {
      // <m+2|J+^2|m> = sqrt(ladder_sq(m) * ladder_sq(m+1)); one sqrt of the
      // exact product keeps e.g. the N=2 element at exactly sqrt(4) = 2.
      const double s2 = std::sqrt(ladder_sq(j, m) * ladder_sq(j, m + 1.0));
      ops.jx_sq.entries(i + 2, i) = 0.25 * s2;
      ops.jx_sq.entries(i, i + 2) = 0.25 * s2;
      ops.jy_sq.entries(i + 2, i) = -0.25 * s2;
      ops.jy_sq.entries(i, i + 2) = -0.25 * s2;
    }
  }
  return ops;
}

OperatorMatrix build_hamiltonian(const ModelParams& params,
                                 const SpinMultipletBasis& basis) {
  params.validate();
  basis.validate();
  if (params.n_particles != basis.n_particles)
    throw std::invalid_argument("basis does not match params.n_particles");

  const int dim = basis.dim();
  const double j = basis.j();
  const double v = params.coupling();

  OperatorMatrix h;
  h.basis = basis;
  h.entries = MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    h.entries(i, i) = params.epsilon * basis.m_value(i);
    if (i + 2 < dim) {
      const double m = basis.m_value(i);
      const double s2 = std::sqrt(ladder_sq(j, m) * ladder_sq(j, m + 1.0));
      h.entries(i + 2, i) = -0.5 * v * s2;
      h.entries(i, i + 2) = -0.5 * v * s2;
    }
  }
  return h;
}

QuantumState lowest_weight_state(const SpinMultipletBasis& basis) {
  basis.validate();
  QuantumState state;
  state.basis = basis;
  state.amplitudes = VectorXcd::Zero(basis.dim());
  state.amplitudes(0) = 1.0;
  return state;
}

std::vector<QuantumState> evolve_exact(const QuantumState& state0,
                                       const OperatorMatrix& hamiltonian,
                                       std::span<const double> times) {
  check_dimensions(state0.basis, hamiltonian.entries);
  if (state0.amplitudes.size() != state0.basis.dim())
    throw std::invalid_argument("state does not match basis dimension");
  if (std::abs(state0.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("evolve_exact requires a normalized state");
  check_hermitian(hamiltonian.entries);

  const int dim = state0.basis.dim();
  std::vector<QuantumState> out(times.size());
  for (auto& state : out) {
    state.basis = state0.basis;
    state.amplitudes = VectorXcd::Zero(dim);
  }

  for (const auto& indices : sparsity_components(hamiltonian.entries)) {
    VectorXcd c0(indices.size());
    for (std::size_t a = 0; a < indices.size(); ++a)
      c0(static_cast<int>(a)) = state0.amplitudes(indices[a]);
    if (c0.cwiseAbs().maxCoeff() == 0.0) continue;  // stays bitwise zero

    const BlockSpectrum spectrum =
        decompose_block(hamiltonian.entries, indices);
    const VectorXcd weights = spectrum.eigenvectors.adjoint() * c0;
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
      const VectorXcd phased =
          (complex<double>(0.0, -times[ti]) * spectrum.eigenvalues.array())
              .exp() *
          weights.array();
      const VectorXcd block_amps = spectrum.eigenvectors * phased;
      for (std::size_t a = 0; a < indices.size(); ++a)
        out[ti].amplitudes(indices[a]) = block_amps(static_cast<int>(a));
    }
  }

  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    if (times[ti] == 0.0) out[ti].amplitudes = state0.amplitudes;
    if (std::abs(out[ti].norm() - 1.0) > 1e-12)
      throw std::runtime_error("propagation lost normalization at t = " +
                               std::to_string(times[ti]));
  }
  return out;
}

ExactObservables exact_observables(const QuantumState& state,
                                   const SpinOperators& ops,
                                   const OperatorMatrix& hamiltonian,
                                   double time) {
  check_dimensions(state.basis, ops.jx.entries);
  check_dimensions(state.basis, hamiltonian.entries);

  ExactObservables obs;
  obs.time = time;
  const OperatorMatrix* components[3] = {&ops.jx, &ops.jy, &ops.jz};
  const OperatorMatrix* squares[3] = {&ops.jx_sq, &ops.jy_sq, &ops.jz_sq};
  for (int i = 0; i < 3; ++i) {
    obs.mean_J[i] = expectation(state.amplitudes, components[i]->entries);
    obs.var_J[i] = expectation(state.amplitudes, squares[i]->entries) -
                   obs.mean_J[i] * obs.mean_J[i];
  }
  obs.energy = expectation(state.amplitudes, hamiltonian.entries);
  return obs;
}

std::vector<ExactObservables> exact_timeseries(const ModelParams& params,
                                               std::span<const double> times) {
  params.validate();
  const SpinMultipletBasis basis{params.n_particles};
  const SpinOperators ops = build_spin_matrices(basis);
  const OperatorMatrix h = build_hamiltonian(params, basis);
  const QuantumState initial = lowest_weight_state(basis);
  const std::vector<QuantumState> states = evolve_exact(initial, h, times);

  std::vector<ExactObservables> series;
  series.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    series.push_back(exact_observables(states[i], ops, h, times[i]));
  return series;
}

}  // namespace lmg
