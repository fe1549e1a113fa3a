#pragma once

// Closed-form dynamics of the Rabi model at omega_q = 0. Each sigma_x branch
// is a displaced harmonic oscillator, so the vacuum evolves into a coherent
// state on a circle of radius alpha = g/omega.

#include <complex>

#include "rabi/qrm_fock.hpp"

namespace rabi::analytic {

/// <N>(t) = 4 alpha^2 sin^2(omega t / 2)
double n_expectation_closed_form(double alpha, double omega, double t);

/// Largest excitation number, 4 alpha^2.
double n_max_closed_form(double alpha);

/// Lower bound on g/omega from an observed excitation number, sqrt(N)/2.
double slow_qubit_bound(double n_observed);

struct DisplacedBranchSolution {
  double alpha = 0;                  // g / omega, >= 0
  Branch branch = Branch::plus;      // sigma_x eigenvalue
  CouplingGauge gauge = CouplingGauge::phase_quadrature;
};

struct BranchEvolution {
  cplx amplitude;  // coherent amplitude of the evolved vacuum
  cplx phase;      // accumulated scalar phase, unit modulus
};

/// Vacuum evolved under one branch Hamiltonian for time t:
///   exp(-iHt/hbar)|0> = phase * |amplitude>.
/// phase_quadrature:    amplitude = i s alpha (e^{-i omega t} - 1)
/// position_quadrature: amplitude =   s alpha (e^{-i omega t} - 1)
/// and in both cases phase = exp(i alpha^2 (omega t - sin omega t)). The
/// Hamiltonians carry no zero-point term, matching QrmHamiltonian's default.
BranchEvolution branch_trajectory(const DisplacedBranchSolution& sol, double omega, double t);

/// <sigma_z>(t) after starting in |g,0> (sign -1) or |e,0> (sign +1):
/// the overlap of the two branch coherent states, -/+ exp(-8 alpha^2 sin^2(omega t/2)).
double sigma_z_collapse(double alpha, double omega, double t, QubitLevel initial);

/// Full state evolved from `initial` at omega_q = 0 assembled from the two
/// branch solutions, written in the Fock basis up to n_max.
FockSpinorState branch_superposition_state(double alpha, double omega, double t,
                                           InitialStateKind initial, int n_max,
                                           CouplingGauge gauge = CouplingGauge::phase_quadrature);

}  // namespace rabi::analytic
