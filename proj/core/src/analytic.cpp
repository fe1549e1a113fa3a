#include "rabi/analytic.hpp"

#include <cmath>
#include <numbers>

namespace rabi::analytic {

double n_expectation_closed_form(double alpha, double omega, double t) {
  const double s = std::sin(0.5 * omega * t);
  return 4.0 * alpha * alpha * s * s;
}

double n_max_closed_form(double alpha) { return 4.0 * alpha * alpha; }

double slow_qubit_bound(double n_observed) {
  if (n_observed < 0.0) throw ParameterError("excitation number must be non-negative");
  return 0.5 * std::sqrt(n_observed);
}

BranchEvolution branch_trajectory(const DisplacedBranchSolution& sol, double omega, double t) {
  if (sol.alpha < 0.0) throw ParameterError("alpha must be non-negative");
  const double s = static_cast<double>(static_cast<int>(sol.branch));
  const cplx rotor = std::polar(1.0, -omega * t) - 1.0;
  // H_s = omega (a^dagger + c*)(a + c) - omega alpha^2, with c the stationary
  // displacement of the branch.
  const cplx c = sol.gauge == CouplingGauge::phase_quadrature ? cplx(0.0, s * sol.alpha)
                                                              : cplx(s * sol.alpha, 0.0);
  const double wt = omega * t;
  const double a2 = sol.alpha * sol.alpha;
  return {c * rotor, std::polar(1.0, a2 * (wt - std::sin(wt)))};
}

double sigma_z_collapse(double alpha, double omega, double t, QubitLevel initial) {
  const double s = std::sin(0.5 * omega * t);
  const double overlap = std::exp(-8.0 * alpha * alpha * s * s);
  return initial == QubitLevel::ground ? -overlap : overlap;
}

FockSpinorState branch_superposition_state(double alpha, double omega, double t,
                                           InitialStateKind initial, int n_max,
                                           CouplingGauge gauge) {
  // Weights of the initial spinor on |n_b=0> = |+> and |n_b=1> = |->.
  const double r = std::numbers::sqrt2 / 2.0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  switch (initial) {
    case InitialStateKind::band_minus2hk: w_plus = 1.0; break;
    case InitialStateKind::band_plus2hk: w_minus = 1.0; break;
    case InitialStateKind::qubit_excited: w_plus = r; w_minus = r; break;   // |e> = (|+> + |->)/sqrt2
    case InitialStateKind::qubit_ground: w_plus = r; w_minus = -r; break;   // |g> = (|+> - |->)/sqrt2
  }

  FockSpinorState psi(n_max);
  for (Branch b : {Branch::plus, Branch::minus}) {
    const double w = b == Branch::plus ? w_plus : w_minus;
    if (w == 0.0) continue;
    const auto evo = branch_trajectory({alpha, b, gauge}, omega, t);
    FockSpinorState coherent = prepare_coherent(evo.amplitude, b, n_max);
    Eigen::VectorXcd amps = psi.amplitudes() + (w * evo.phase) * coherent.amplitudes();
    psi = FockSpinorState(n_max, std::move(amps));
  }
  return psi;
}

}  // namespace rabi::analytic
