#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "rabi/analytic.hpp"

using namespace rabi;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(ClosedForm, QuotedPeakExcitations) {
  // Deep strong coupling at 346 Hz and the weaker case at 4 g/omega ~ 53.5.
  const auto p = ExperimentParams::from_hz(346.0, 0.0);
  EXPECT_NEAR(analytic::n_max_closed_form(p.g_over_omega()), 173.2, 1.0);
  EXPECT_NEAR(analytic::n_expectation_closed_form(p.g_over_omega(), p.omega(), kPi / p.omega()),
              4.0 * p.g_over_omega() * p.g_over_omega(), 1e-9);
  const double alpha = std::sqrt(53.5) / 2.0;
  EXPECT_NEAR(analytic::n_max_closed_form(alpha), 53.5, 1e-12);
}

TEST(ClosedForm, RandomisedProperties) {
  std::mt19937 rng(20261015);
  std::uniform_real_distribution<double> ua(0.1, 8.0), uw(500.0, 5000.0), ut(0.0, 0.05);
  for (int i = 0; i < 200; ++i) {
    const double alpha = ua(rng);
    const double w = uw(rng);
    const double t = ut(rng);
    const double n = analytic::n_expectation_closed_form(alpha, w, t);
    EXPECT_NEAR(n, oracle::n_closed(alpha, w * t), 1e-12 * (1 + n));
    EXPECT_GE(n, 0.0);
    EXPECT_LE(n, 4 * alpha * alpha * (1 + 1e-14));
    // periodic in 2 pi / omega and symmetric around pi / omega
    EXPECT_NEAR(analytic::n_expectation_closed_form(alpha, w, t + 2 * kPi / w), n, 1e-9 * (1 + n));
    EXPECT_NEAR(analytic::n_expectation_closed_form(alpha, w, 2 * kPi / w - t), n, 1e-9 * (1 + n));
    EXPECT_NEAR(analytic::slow_qubit_bound(analytic::n_max_closed_form(alpha)), alpha, 1e-12 * alpha);
  }
  EXPECT_DOUBLE_EQ(analytic::n_expectation_closed_form(3.0, 1000.0, 0.0), 0.0);
}

TEST(ClosedForm, SlowQubitBoundGrowsWithObservedExcitation) {
  EXPECT_DOUBLE_EQ(analytic::slow_qubit_bound(0.0), 0.0);
  EXPECT_NEAR(analytic::slow_qubit_bound(100.0), 5.0, 1e-12);
  EXPECT_LT(analytic::slow_qubit_bound(40.0), analytic::slow_qubit_bound(41.0));
}

TEST(BranchTrajectory, CircleOfRadiusAlpha) {
  const double alpha = 2.5;
  const double w = 2 * kPi * 346.0;
  for (double wt : {0.0, 0.7, kPi / 2, kPi, 4.0}) {
    for (auto br : {Branch::plus, Branch::minus}) {
      const double s = static_cast<int>(br);
      const auto ph = analytic::branch_trajectory({alpha, br, CouplingGauge::phase_quadrature}, w, wt / w);
      const auto po = analytic::branch_trajectory({alpha, br, CouplingGauge::position_quadrature}, w, wt / w);
      const cplx circ = std::polar(1.0, -wt) - 1.0;
      EXPECT_NEAR(std::abs(ph.amplitude - cplx(0, s * alpha) * circ), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(po.amplitude - s * alpha * circ), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(ph.phase), 1.0, 1e-14);
      EXPECT_NEAR(std::arg(ph.phase * std::polar(1.0, -alpha * alpha * (wt - std::sin(wt)))), 0.0, 1e-10);
      EXPECT_NEAR(std::norm(ph.amplitude), oracle::n_closed(alpha, wt), 1e-10);
    }
  }
}

TEST(BranchTrajectory, MatchesFockEvolutionIncludingPhase) {
  const auto p = ExperimentParams::from_coupling_ratio(2.0, 0.0);
  const int n_max = 80;
  QrmHamiltonian h(p, n_max);
  // |+>|0> with |+> = (|e> + |g>)/sqrt2 stays on the plus branch.
  const auto psi0 = prepare_state(InitialStateKind::band_minus2hk, n_max);
  for (double wt : {0.5, 2.0, 5.5}) {
    const auto psi = evolve(h, psi0, wt / p.omega());
    const auto sol = analytic::branch_trajectory({2.0, Branch::plus}, p.omega(), wt / p.omega());
    const auto c = oracle::coherent(sol.amplitude, n_max);
    const double r = std::sqrt(0.5);
    for (int n = 0; n < 30; ++n) {
      EXPECT_NEAR(std::abs(psi(QubitLevel::excited, n) - r * sol.phase * c[n]), 0.0, 1e-10);
      EXPECT_NEAR(std::abs(psi(QubitLevel::ground, n) - r * sol.phase * c[n]), 0.0, 1e-10);
    }
  }
}

TEST(SigmaZCollapse, AgreesWithFockEvolution) {
  const auto p = ExperimentParams::from_hz(346.0, 0.0);
  const int n_max = choose_truncation(p);
  QrmHamiltonian h(p, n_max);
  for (auto level : {QubitLevel::ground, QubitLevel::excited}) {
    const auto kind = level == QubitLevel::ground ? InitialStateKind::qubit_ground
                                                  : InitialStateKind::qubit_excited;
    const auto psi0 = prepare_state(kind, n_max);
    for (double t : {0.0, 10e-6, 40e-6, 200e-6, 2.0 * kPi / p.omega()}) {
      const auto r = observables(evolve(h, psi0, t), h);
      const double sz = analytic::sigma_z_collapse(p.g_over_omega(), p.omega(), t, level);
      EXPECT_NEAR(r.sigma_z, sz, 1e-6) << "t = " << t;
      const double s = std::sin(0.5 * p.omega() * t);
      const double sign = level == QubitLevel::ground ? -1.0 : 1.0;
      EXPECT_NEAR(sz, sign * std::exp(-8.0 * p.g_over_omega() * p.g_over_omega() * s * s), 1e-14);
    }
  }
}

TEST(BranchSuperposition, FidelityWithFockEvolution) {
  const auto p = ExperimentParams::from_hz(346.0, 0.0);
  const int n_max = choose_truncation(p);
  for (auto gauge : {CouplingGauge::phase_quadrature, CouplingGauge::position_quadrature}) {
    QrmHamiltonian h(p, n_max, gauge);
    for (auto kind : {InitialStateKind::qubit_ground, InitialStateKind::qubit_excited,
                      InitialStateKind::band_minus2hk, InitialStateKind::band_plus2hk}) {
      for (double t : {100e-6, 722e-6, 1.5e-3}) {
        const auto exact = evolve(h, prepare_state(kind, n_max), t);
        const auto closed =
            analytic::branch_superposition_state(p.g_over_omega(), p.omega(), t, kind, n_max, gauge);
        EXPECT_NEAR(std::abs(closed.overlap(exact)), 1.0, 1e-8);
        // phases included, not only up to a global factor
        EXPECT_LT((closed.amplitudes() - exact.amplitudes()).norm(), 1e-6);
      }
    }
  }
}
