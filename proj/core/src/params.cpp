#include "rabi/params.hpp"

#include <cmath>
#include <numbers>

namespace rabi {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(what) + " must be a positive finite number");
  }
}

void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(what) + " must be a non-negative finite number");
  }
}

}  // namespace

void PhysicalConstants::validate() const {
  require_positive(hbar, "hbar");
  require_positive(atom_mass, "atom_mass");
}

double derive_coupling(double omega, double k, double mass, const PhysicalConstants& c) {
  require_positive(omega, "omega");
  require_positive(k, "k");
  require_positive(mass, "mass");
  c.validate();
  return k * std::sqrt(2.0 * c.hbar * omega / mass);
}

double lattice_depth_from_qubit_freq(double omega_q, const PhysicalConstants& c) {
  require_non_negative(omega_q, "omega_q");
  return 2.0 * c.hbar * omega_q;
}

double qubit_freq_from_lattice_depth(double depth, const PhysicalConstants& c) {
  require_non_negative(depth, "lattice depth");
  return depth / (2.0 * c.hbar);
}

ExperimentParams::ExperimentParams(double omega, double omega_q, double lambda,
                                   const PhysicalConstants& c)
    : omega_(omega), omega_q_(omega_q), lambda_(lambda), constants_(c) {
  require_positive(omega, "omega");
  require_non_negative(omega_q, "omega_q");
  require_positive(lambda, "lambda");
  c.validate();
  k_ = 2.0 * std::numbers::pi / lambda_;
  g_ = derive_coupling(omega_, k_, c.atom_mass, c);
  depth_ = lattice_depth_from_qubit_freq(omega_q_, c);
}

ExperimentParams ExperimentParams::from_trap(double omega, double omega_q, double lambda,
                                             const PhysicalConstants& c) {
  return ExperimentParams(omega, omega_q, lambda, c);
}

ExperimentParams ExperimentParams::from_hz(double omega_hz, double omega_q_hz, double lambda_nm,
                                           const PhysicalConstants& c) {
  return ExperimentParams(hz_to_rad(omega_hz), hz_to_rad(omega_q_hz), lambda_nm * 1e-9, c);
}

ExperimentParams ExperimentParams::from_coupling_ratio(double g_over_omega, double omega_q,
                                                       double lambda,
                                                       const PhysicalConstants& c) {
  require_positive(g_over_omega, "g/omega");
  require_positive(lambda, "lambda");
  c.validate();
  // g/omega = k sqrt(2 hbar / (m omega))  =>  omega = 2 hbar k^2 / (m (g/omega)^2)
  const double k = 2.0 * std::numbers::pi / lambda;
  const double omega = 2.0 * c.hbar * k * k / (c.atom_mass * g_over_omega * g_over_omega);
  return ExperimentParams(omega, omega_q, lambda, c);
}

ExperimentParams ExperimentParams::with_omega_q(double omega_q) const {
  return ExperimentParams(omega_, omega_q, lambda_, constants_);
}

double ExperimentParams::oscillator_length() const {
  return std::sqrt(hbar() / (mass() * omega_));
}

double ExperimentParams::oscillator_momentum() const {
  return std::sqrt(hbar() * mass() * omega_);
}

CharacteristicScales characteristic_scales(const ExperimentParams& p) {
  CharacteristicScales s;
  s.x_ho = std::sqrt(2.0 * p.hbar() / (p.mass() * p.omega()));
  s.x_m0 = 2.0 * p.hbar() * p.k() / (p.mass() * p.omega());
  s.t_edge = std::numbers::pi / (2.0 * p.omega());
  s.g_over_omega = p.g_over_omega();
  return s;
}

}  // namespace rabi
