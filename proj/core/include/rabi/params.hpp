#pragma once

// Physical constants, experiment parameters and the derived scales of the
// trapped-atom Rabi system. Every public quantity is SI; frequencies are
// angular (rad/s) unless a name ends in _hz.

#include <numbers>
#include <stdexcept>
#include <string>

namespace rabi {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kRb87MassU = 86.909;
inline constexpr double kDefaultLambda = 783.5e-9;  // m

inline constexpr double hz_to_rad(double hz) { return 2.0 * std::numbers::pi * hz; }
inline constexpr double rad_to_hz(double w) { return w / (2.0 * std::numbers::pi); }

struct PhysicalConstants {
  double hbar = 1.054571817e-34;               // J s
  double atom_mass = kRb87MassU * kAtomicMassUnit;  // kg

  void validate() const;
};

/// g = k sqrt(2 hbar omega / m). Throws ParameterError for non-positive input.
double derive_coupling(double omega, double k, double mass,
                       const PhysicalConstants& c = {});

/// Lattice depth for a given band splitting, V = 2 hbar omega_q.
double lattice_depth_from_qubit_freq(double omega_q, const PhysicalConstants& c = {});
double qubit_freq_from_lattice_depth(double depth, const PhysicalConstants& c = {});

/// Immutable parameter set. Construct through one of the factories; the
/// coupling g and lattice depth V are always derived, never set directly.
class ExperimentParams {
 public:
  static ExperimentParams from_trap(double omega, double omega_q,
                                    double lambda = kDefaultLambda,
                                    const PhysicalConstants& c = {});
  static ExperimentParams from_hz(double omega_hz, double omega_q_hz,
                                  double lambda_nm = kDefaultLambda * 1e9,
                                  const PhysicalConstants& c = {});
  /// Picks the trap frequency that realises g/omega at fixed k and m, the way
  /// the experiment scans the coupling ratio.
  static ExperimentParams from_coupling_ratio(double g_over_omega, double omega_q,
                                              double lambda = kDefaultLambda,
                                              const PhysicalConstants& c = {});

  ExperimentParams with_omega_q(double omega_q) const;

  double omega() const { return omega_; }
  double omega_q() const { return omega_q_; }
  double lambda() const { return lambda_; }
  double k() const { return k_; }
  double g() const { return g_; }
  double depth() const { return depth_; }
  const PhysicalConstants& constants() const { return constants_; }
  double hbar() const { return constants_.hbar; }
  double mass() const { return constants_.atom_mass; }

  double g_over_omega() const { return g_ / omega_; }
  double omega_q_over_omega() const { return omega_q_ / omega_; }
  /// Natural oscillator length sqrt(hbar / m omega).
  double oscillator_length() const;
  /// Natural oscillator momentum sqrt(hbar m omega).
  double oscillator_momentum() const;

 private:
  ExperimentParams(double omega, double omega_q, double lambda, const PhysicalConstants& c);

  double omega_ = 0;
  double omega_q_ = 0;
  double lambda_ = 0;
  double k_ = 0;
  double g_ = 0;
  double depth_ = 0;
  PhysicalConstants constants_;
};

struct CharacteristicScales {
  double x_ho = 0;          // sqrt(2 hbar / m omega)
  double x_m0 = 0;          // 2 hbar k / m omega
  double t_edge = 0;        // pi / (2 omega)
  double g_over_omega = 0;
};

CharacteristicScales characteristic_scales(const ExperimentParams& p);

}  // namespace rabi
