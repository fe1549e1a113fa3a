#pragma once

// Full single-particle Hamiltonian of an atom in the trap plus lambda/4 lattice,
//
//   H = p^2/2m + m omega^2 x^2/2 + (V/2) cos(4 k x),
//
// on a periodic position grid, propagated by split-step Fourier. This is the
// independent reference for the two-band reduction: it keeps every band.

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "rabi/observables.hpp"
#include "rabi/params.hpp"
#include "rabi/periodic.hpp"
#include "rabi/qrm_fock.hpp"

namespace rabi {

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
class FftPlan;
}

/// Grid x_i = -L + i dx, dx = 2L / n_x; discrete normalisation sum |psi|^2 = 1.
class LatticeGridState {
 public:
  LatticeGridState(int n_x, double half_extent);

  int n_x() const { return static_cast<int>(psi_.size()); }
  double half_extent() const { return half_extent_; }
  double dx() const { return 2.0 * half_extent_ / n_x(); }
  double x(int i) const { return -half_extent_ + i * dx(); }

  std::span<cplx> amplitudes() { return psi_; }
  std::span<const cplx> amplitudes() const { return psi_; }
  cplx operator[](int i) const { return psi_[i]; }
  cplx& operator[](int i) { return psi_[i]; }

  double norm() const;

 private:
  double half_extent_;
  std::vector<cplx> psi_;
};

class LatticeModel {
 public:
  /// The half extent is rounded to a whole number of lattice periods so that
  /// +-2 hbar k and +-4 hbar k fall on the momentum grid. Throws GridError if
  /// dx > lambda/40 or L < 3 x_m0.
  LatticeModel(const ExperimentParams& params, int n_x, double half_extent);

  const ExperimentParams& params() const { return params_; }
  int n_x() const { return n_x_; }
  double half_extent() const { return half_extent_; }
  double dx() const { return 2.0 * half_extent_ / n_x_; }
  double dp() const;
  double x(int i) const { return -half_extent_ + i * dx(); }
  /// Momentum of FFT slot j.
  double p(int j) const;
  /// Number of momentum grid points per 4 hbar k.
  int points_per_zone() const;

  double potential_rate(int i) const;  // V(x_i)/hbar
  double kinetic_rate(int j) const;    // p_j^2 / (2 m hbar)
  double max_rate() const;

 private:
  ExperimentParams params_;
  int n_x_;
  double half_extent_;
};

class LatticePropagator {
 public:
  LatticePropagator(const LatticeModel& model, double dt, SplitOrder order = SplitOrder::fourth);
  ~LatticePropagator();
  LatticePropagator(LatticePropagator&&) noexcept;
  LatticePropagator& operator=(LatticePropagator&&) noexcept;

  const LatticeModel& model() const { return model_; }
  double dt() const { return dt_; }
  SplitOrder order() const { return order_; }

  /// Throws DomainError if the wave packet reaches the box edge.
  void advance(LatticeGridState& state, double t);
  /// Observables in the Rabi frame (x and q mirrored, see periodic.hpp).
  ObservableRecord observe(const LatticeGridState& state, double t);
  /// Momentum amplitudes phi(p_j), sum |phi|^2 = sum |psi|^2.
  std::vector<cplx> momentum_amplitudes(const LatticeGridState& state);
  /// Physical <p>, for checks against the classical trap motion.
  double mean_momentum(const LatticeGridState& state);

 private:
  void set_step(double h);
  void step(LatticeGridState& state);
  void check_domain(const LatticeGridState& state);

  LatticeModel model_;
  double dt_;
  SplitOrder order_;
  double h_ = -1.0;
  std::vector<std::vector<cplx>> potential_kicks_;  // one table per a-coefficient
  std::vector<std::vector<cplx>> kinetic_kicks_;    // one table per b-coefficient
  std::unique_ptr<detail::FftPlan> fft_;
};

/// Harmonic-oscillator ground state dressed with the band spinor of `kind`:
/// n_b = 0 -> exp(-2ikx), n_b = 1 -> exp(+2ikx).
LatticeGridState prepare_lattice_initial(InitialStateKind kind, const LatticeModel& model);

LatticeGridState evolve_lattice(const LatticeGridState& state, const ExperimentParams& params,
                                double t, double dt, SplitOrder order = SplitOrder::fourth);

Trajectory evolve_lattice_series(const LatticeModel& model, const LatticeGridState& state0,
                                 std::span<const double> times, double dt,
                                 SplitOrder order = SplitOrder::fourth);

/// Plane-wave decomposition of a lattice state onto the two-band grid,
/// c_b(q) = phi(2 hbar k (2b - 1) - q) for |p| <= 4 hbar k. Weight outside
/// that window is dropped; `captured` reports what was kept.
struct BlochProjection {
  TwoBandQState state;
  double captured = 0;
};
BlochProjection bloch_project(const LatticeGridState& state, LatticePropagator& prop);

/// Lowest band energies (J) of (V/2) cos(4kx) alone at Bloch quasimomentum
/// q, in the basis p = q - 2 hbar k + 4 hbar k n, |n| <= harmonics.
std::vector<double> lattice_band_energies(double q, const ExperimentParams& params,
                                          int harmonics = 8);

}  // namespace rabi
