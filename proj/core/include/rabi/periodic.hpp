#pragma once

// Periodic quantum Rabi model: the two lowest bands of the lambda/4 lattice on
// a compact quasimomentum grid,
//
//   H = q^2/2m + m omega^2 x^2/2 + (2 hbar k/m) diag(1,-1) q + (V/4) offdiag,
//
// written in the band basis (n_b = 0, 1) with x = i hbar d/dq.
//
// Grid layout. Amplitudes are stored band-major, [n_b=0 | n_b=1], each block on
// q_i = -2 hbar k + i dq, i < n_q, dq = 4 hbar k / n_q. Crossing the zone edge
// swaps the band label (n_b=0 at q - 4 hbar k is n_b=1 at q), which makes the
// whole array one momentum ring of circumference 8 hbar k: slot k sits at
// s = k dq (mod 8 hbar k), and the position conjugate to s is sampled every
// lambda/8. The free-flight momentum of slot k is p = -s, i.e.
// p = 2 hbar k (2 n_b - 1) - q.

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rabi/observables.hpp"
#include "rabi/params.hpp"
#include "rabi/qrm_fock.hpp"

namespace rabi {

class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepSizeError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

namespace detail {
class FftPlan;
}

/// Operator splitting used by the split-step propagators: second is plain
/// Strang, fourth the triple-jump composition of three Strang steps.
enum class SplitOrder { second = 2, fourth = 4 };

class TwoBandQState {
 public:
  TwoBandQState(int n_q, double zone_halfwidth);

  int n_q() const { return n_q_; }
  double dq() const { return 2.0 * zone_halfwidth_ / n_q_; }
  double q(int i) const { return -zone_halfwidth_ + i * dq(); }
  double zone_halfwidth() const { return zone_halfwidth_; }

  cplx operator()(int band, int i) const { return amps_[band * n_q_ + i]; }
  cplx& operator()(int band, int i) { return amps_[band * n_q_ + i]; }

  std::span<cplx> amplitudes() { return amps_; }
  std::span<const cplx> amplitudes() const { return amps_; }

  /// Discrete norm, sum |c|^2.
  double norm() const;

 private:
  int n_q_;
  double zone_halfwidth_;  // 2 hbar k
  std::vector<cplx> amps_;
};

class PeriodicRabiModel {
 public:
  PeriodicRabiModel(const ExperimentParams& params, int n_q);

  const ExperimentParams& params() const { return params_; }
  int n_q() const { return n_q_; }
  double zone_halfwidth() const { return 2.0 * params_.hbar() * params_.k(); }
  double dq() const { return 2.0 * zone_halfwidth() / n_q_; }
  double q(int i) const { return -zone_halfwidth() + i * dq(); }
  /// Position of FFT slot j of the 2 n_q ring transform.
  double x(int j) const;

  /// q-diagonal block at grid point i, H/hbar in rad/s.
  Eigen::Matrix2d q_block(int i) const;
  /// Trap term at FFT slot j, (m omega^2 x^2 / 2)/hbar in rad/s.
  double trap_rate(int j) const;
  /// Fastest rate in the problem, max(omega, omega_q, g).
  double max_rate() const;

 private:
  ExperimentParams params_;
  int n_q_;
};

/// Split-step propagator. A Strang step is a half step of the exact 2x2
/// q-diagonal exponentials, a full trap step in the conjugate position and
/// another half q step.
class PeriodicPropagator {
 public:
  /// Throws StepSizeError unless dt * max_rate <= 0.02.
  PeriodicPropagator(const PeriodicRabiModel& model, double dt,
                     SplitOrder order = SplitOrder::fourth);
  ~PeriodicPropagator();
  PeriodicPropagator(PeriodicPropagator&&) noexcept;
  PeriodicPropagator& operator=(PeriodicPropagator&&) noexcept;

  double dt() const { return dt_; }
  SplitOrder order() const { return order_; }
  const PeriodicRabiModel& model() const { return model_; }

  /// Advances by exactly t using ceil(t/dt) equal steps.
  void advance(TwoBandQState& state, double t);
  ObservableRecord observe(const TwoBandQState& state, double t);

 private:
  void set_step(double h);
  void step(TwoBandQState& state);

  PeriodicRabiModel model_;
  double dt_;
  SplitOrder order_;
  double h_ = -1.0;
  std::vector<std::vector<Eigen::Matrix2cd>> q_kicks_;  // one table per a-coefficient
  std::vector<std::vector<cplx>> trap_kicks_;           // one table per b-coefficient
  std::unique_ptr<detail::FftPlan> fft_;
  std::unique_ptr<detail::FftPlan> fine_fft_;           // oversampled grid for observe()
};

PeriodicRabiModel build_two_band_model(const ExperimentParams& params, int n_q);

/// Gaussian envelope |psi(q)|^2 ~ exp(-q^2 / hbar m omega) times the band
/// spinor of `kind`. Throws GridError when more than 1e-8 of the envelope
/// falls outside the zone.
TwoBandQState prepare_periodic_initial(InitialStateKind kind, const ExperimentParams& params,
                                       int n_q);

TwoBandQState evolve_periodic(const TwoBandQState& state, const ExperimentParams& params, double t,
                              double dt, SplitOrder order = SplitOrder::fourth);

ObservableRecord periodic_observables(const TwoBandQState& state, const ExperimentParams& params,
                                      double t = 0.0);

Trajectory evolve_periodic_series(const PeriodicRabiModel& model, const TwoBandQState& state0,
                                  std::span<const double> times, double dt,
                                  SplitOrder order = SplitOrder::fourth);

struct MomentumDensity {
  std::vector<double> p;       // kg m / s, increasing
  std::vector<double> weight;  // probability per grid point, sums to 1
};

/// Free-flight momentum distribution, p = 2 hbar k (2 n_b - 1) - q.
MomentumDensity band_mapping(const TwoBandQState& state);

}  // namespace rabi
