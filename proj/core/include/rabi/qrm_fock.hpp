#pragma once

// Quantum Rabi Hamiltonian
//
//   H = hbar omega a^dagger a + (hbar omega_q / 2) sigma_z + i hbar g sigma_x (a^dagger - a)
//
// on the truncated space qubit (x) Fock{0..n_max}. Propagation is exact in
// time: the Hamiltonian is diagonalised once and exp(-iHt/hbar) is applied in
// the eigenbasis.
//
// Basis ordering is qubit-major with |e> first: index = s * (n_max + 1) + n,
// s = 0 for |e> (sigma_z = +1) and s = 1 for |g> (sigma_z = -1). The band
// (sigma_x) basis is |n_b=0> = (|e> + |g>)/sqrt2, |n_b=1> = (|e> - |g>)/sqrt2.

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rabi/observables.hpp"
#include "rabi/params.hpp"

namespace rabi {

using cplx = std::complex<double>;

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class QubitLevel : int { excited = 0, ground = 1 };

/// Which quadrature the qubit couples to. phase_quadrature is the
/// i g sigma_x (a^dagger - a) form used throughout; position_quadrature is the
/// g sigma_x (a + a^dagger) form of the displaced-oscillator algebra. The two
/// are related by the mode rotation a -> -i a.
enum class CouplingGauge { phase_quadrature, position_quadrature };

enum class InitialStateKind { qubit_ground, qubit_excited, band_minus2hk, band_plus2hk };

/// Eigenvalue of sigma_x selecting a displaced branch.
enum class Branch : int { plus = 1, minus = -1 };

class FockSpinorState {
 public:
  explicit FockSpinorState(int n_max);
  FockSpinorState(int n_max, Eigen::VectorXcd amplitudes);

  int n_max() const { return n_max_; }
  Eigen::Index dimension() const { return amps_.size(); }

  static Eigen::Index index(QubitLevel s, int n, int n_max) {
    return static_cast<Eigen::Index>(static_cast<int>(s)) * (n_max + 1) + n;
  }

  cplx operator()(QubitLevel s, int n) const { return amps_[index(s, n, n_max_)]; }
  cplx& operator()(QubitLevel s, int n) { return amps_[index(s, n, n_max_)]; }

  const Eigen::VectorXcd& amplitudes() const { return amps_; }

  double norm() const { return amps_.squaredNorm(); }
  /// Weight in the top `width` Fock levels, summed over both qubit states.
  double tail_mass(int width = 5) const;
  /// <this|other>
  cplx overlap(const FockSpinorState& other) const;

 private:
  int n_max_;
  Eigen::VectorXcd amps_;
};

/// Dense Hamiltonian with its cached spectral decomposition. Matrix entries
/// and eigenvalues are H/hbar in rad/s.
class QrmHamiltonian {
 public:
  QrmHamiltonian(const ExperimentParams& params, int n_max,
                 CouplingGauge gauge = CouplingGauge::phase_quadrature,
                 bool include_zero_point = false);

  const ExperimentParams& params() const { return params_; }
  int n_max() const { return n_max_; }
  Eigen::Index dimension() const { return matrix_.rows(); }
  CouplingGauge gauge() const { return gauge_; }

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXcd& eigenvectors() const { return eigenvectors_; }

  /// <psi|H|psi> in J.
  double energy(const FockSpinorState& psi) const;

 private:
  ExperimentParams params_;
  int n_max_;
  CouplingGauge gauge_;
  Eigen::MatrixXcd matrix_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

QrmHamiltonian build_qrm_hamiltonian(const ExperimentParams& params, int n_max,
                                     CouplingGauge gauge = CouplingGauge::phase_quadrature);

/// Fock cutoff sized from the largest excitation number 4(g/omega)^2 plus
/// `safety` standard deviations of its Poisson spread and a fixed margin of 20.
int choose_truncation(const ExperimentParams& params, double safety = 10.0);

FockSpinorState prepare_state(InitialStateKind kind, int n_max);
/// Coherent state |alpha> on the sigma_x branch. Throws TruncationError when
/// the cutoff cannot hold it.
FockSpinorState prepare_coherent(cplx alpha, Branch branch, int n_max);

/// Throws TruncationError if the tail mass exceeds `tolerance`.
void check_truncation(const FockSpinorState& psi, double tolerance = 1e-8);

/// exp(-iHt/hbar) psi0 through the cached eigenbasis.
FockSpinorState evolve(const QrmHamiltonian& h, const FockSpinorState& psi0, double t);

/// Reusable propagation from one initial state: the eigenbasis projection of
/// psi0 is computed once and each call to at() costs one matrix-vector product.
class QrmPropagator {
 public:
  QrmPropagator(const QrmHamiltonian& h, const FockSpinorState& psi0);
  FockSpinorState at(double t) const;

 private:
  const QrmHamiltonian* h_;
  Eigen::VectorXcd coefficients_;
};

ObservableRecord observables(const FockSpinorState& psi, const QrmHamiltonian& h, double t = 0.0);

Trajectory evolve_series(const QrmHamiltonian& h, const FockSpinorState& psi0,
                         std::span<const double> times);

/// Parity operator sigma_z (-1)^{a^dagger a} as a diagonal.
Eigen::VectorXd parity_diagonal(int n_max);

/// |psi(x)|^2 summed over the qubit, in 1/m, on the given positions (m).
std::vector<double> position_density(const FockSpinorState& psi, const ExperimentParams& params,
                                     std::span<const double> x);

}  // namespace rabi
