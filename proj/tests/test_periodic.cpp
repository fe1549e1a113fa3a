#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "rabi/periodic.hpp"

using namespace rabi;

namespace {

constexpr double kPi = std::numbers::pi;

ExperimentParams trap346(double wq_hz = 0.0) { return ExperimentParams::from_hz(346.0, wq_hz); }

double distance(const TwoBandQState& a, const TwoBandQState& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.amplitudes().size(); ++i) s += std::norm(a.amplitudes()[i] - b.amplitudes()[i]);
  return std::sqrt(s);
}

}  // namespace

TEST(PeriodicModel, BlockCarriesGapAndCoupling) {
  const auto p = trap346(586.0);
  PeriodicRabiModel m(p, 1024);
  // q = 0 sits at i = n_q / 2: only the off-diagonal band coupling is left.
  const auto b0 = m.q_block(512);
  EXPECT_NEAR(m.q(512), 0.0, 1e-40);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(b0);
  EXPECT_NEAR(es.eigenvalues()[1] - es.eigenvalues()[0], oracle::omega(586.0), 1e-9 * oracle::omega(586.0));
  // The linear band term equals g q / sqrt(hbar m omega / 2).
  const double w = oracle::omega(346.0);
  for (int i : {0, 100, 700, 1023}) {
    const auto b = m.q_block(i);
    const double lin = 0.5 * (b(0, 0) - b(1, 1));
    const double expect = oracle::coupling(w) * m.q(i) / std::sqrt(oracle::kHbar * oracle::kMass * w / 2);
    EXPECT_NEAR(lin, expect, 1e-9 * std::abs(expect) + 1e-12);
  }
  EXPECT_NEAR(m.zone_halfwidth(), 2 * oracle::kHbar * oracle::k_wave(), 1e-9 * m.zone_halfwidth());
  EXPECT_NEAR(m.x(1) - m.x(0), oracle::kLambda / 8, 1e-20);
}

TEST(PeriodicInitial, BandAndQubitStates) {
  const auto p = trap346();
  struct Case {
    InitialStateKind kind;
    double sx, sz, q_sign;
  };
  for (auto c : {Case{InitialStateKind::band_minus2hk, 1, 0, 0}, Case{InitialStateKind::band_plus2hk, -1, 0, 0},
                 Case{InitialStateKind::qubit_ground, 0, -1, 0}, Case{InitialStateKind::qubit_excited, 0, 1, 0}}) {
    const auto st = prepare_periodic_initial(c.kind, p, 1024);
    const auto r = periodic_observables(st, p);
    EXPECT_NEAR(r.norm, 1.0, 1e-12);
    EXPECT_NEAR(r.sigma_x, c.sx, 1e-8);
    EXPECT_NEAR(r.sigma_z, c.sz, 1e-8);
    EXPECT_NEAR(r.N, 0.0, 1e-6);
    EXPECT_NEAR(r.x, 0.0, 1e-12);
    EXPECT_NEAR(r.q, 0.0, 1e-8 * p.hbar() * p.k());
  }
}

TEST(PeriodicInitial, RejectsEnvelopeCutByZoneEdge) {
  const auto weak = ExperimentParams::from_coupling_ratio(1.0, 0.0);
  EXPECT_THROW(prepare_periodic_initial(InitialStateKind::band_minus2hk, weak, 1024), GridError);
  EXPECT_THROW(PeriodicRabiModel(trap346(), 3), GridError);
}

TEST(PeriodicPropagator, RejectsOversizedStep) {
  PeriodicRabiModel m(trap346(), 256);
  const double limit = 0.02 / m.max_rate();
  EXPECT_THROW(PeriodicPropagator(m, 1.5 * limit), StepSizeError);
  EXPECT_NO_THROW(PeriodicPropagator(m, 0.9 * limit));
  EXPECT_THROW(PeriodicPropagator(m, 0.0), StepSizeError);
}

TEST(PeriodicEvolution, ConservesNormAndEnergy) {
  const auto p = trap346(586.0);
  PeriodicRabiModel m(p, 1024);
  const auto st0 = prepare_periodic_initial(InitialStateKind::band_minus2hk, p, 1024);
  std::vector<double> times;
  for (int i = 0; i <= 14; ++i) times.push_back(i * 50e-6);
  const auto traj = evolve_periodic_series(m, st0, times, 0.1e-6);
  const double e_scale = p.hbar() * p.omega();
  for (const auto& r : traj) {
    EXPECT_NEAR(r.norm, 1.0, 1e-10);
    EXPECT_NEAR(r.energy, traj.front().energy, 1e-10 * e_scale);
  }
}

TEST(PeriodicEvolution, PositionAmplitudeIsXm0) {
  const auto p = trap346();
  const auto st0 = prepare_periodic_initial(InitialStateKind::band_minus2hk, p, 1024);
  const double t = 0.5 * kPi / p.omega();  // edge of the zone
  const auto st = evolve_periodic(st0, p, t, 0.1e-6);
  const auto r = periodic_observables(st, p, t);
  EXPECT_NEAR(r.x, oracle::x_m0(p.omega()), 0.02 * oracle::x_m0(p.omega()));
}

TEST(PeriodicEvolution, AgreesWithFockModelBeforeZoneEdge) {
  for (double wq : {0.0, 586.0, 1660.0}) {
    const auto p = trap346(wq);
    const double t = 0.25 * kPi / p.omega();
    const auto st = evolve_periodic(prepare_periodic_initial(InitialStateKind::band_minus2hk, p, 1024), p, t, 0.1e-6);
    const auto r = periodic_observables(st, p, t);
    QrmHamiltonian h(p, choose_truncation(p));
    const auto f = observables(evolve(h, prepare_state(InitialStateKind::band_minus2hk, h.n_max()), t), h, t);
    const double n_range = 4 * p.g_over_omega() * p.g_over_omega();
    EXPECT_NEAR(r.N, f.N, 0.02 * n_range) << wq;
    EXPECT_NEAR(r.x, f.x, 0.02 * oracle::x_m0(p.omega())) << wq;
    EXPECT_NEAR(r.q, f.q, 0.02 * 2 * p.hbar() * p.k()) << wq;
    EXPECT_NEAR(r.sigma_x, f.sigma_x, 0.02) << wq;
    EXPECT_NEAR(r.sigma_z, f.sigma_z, 0.02) << wq;
  }
}

TEST(PeriodicEvolution, SplittingOrder) {
  const auto p = trap346(1660.0);
  const auto st0 = prepare_periodic_initial(InitialStateKind::band_minus2hk, p, 512);
  const double t = 200e-6;
  const auto ref = evolve_periodic(st0, p, t, 0.02e-6, SplitOrder::fourth);
  for (auto order : {SplitOrder::second, SplitOrder::fourth}) {
    const double e1 = distance(evolve_periodic(st0, p, t, 1.0e-6, order), ref);
    const double e2 = distance(evolve_periodic(st0, p, t, 0.5e-6, order), ref);
    const double rate = std::log2(e1 / e2);
    EXPECT_NEAR(rate, static_cast<int>(order), 0.4) << "order " << static_cast<int>(order);
  }
}

TEST(BandMapping, SortedMomentaWithUnitWeight) {
  const auto p = trap346();
  const auto st = prepare_periodic_initial(InitialStateKind::band_minus2hk, p, 256);
  const auto md = band_mapping(st);
  ASSERT_EQ(md.p.size(), 512u);
  double total = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < md.p.size(); ++i) {
    if (i > 0) EXPECT_GT(md.p[i], md.p[i - 1]);
    total += md.weight[i];
    mean += md.p[i] * md.weight[i];
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  // Lower band only: free flight at -2 hbar k.
  EXPECT_NEAR(mean, -2 * p.hbar() * p.k(), 1e-6 * p.hbar() * p.k());
  // A qubit eigenstate splits evenly between -2 hbar k and +2 hbar k.
  const auto mq = band_mapping(prepare_periodic_initial(InitialStateKind::qubit_excited, p, 256));
  double left = 0.0;
  for (std::size_t i = 0; i < mq.p.size(); ++i)
    if (mq.p[i] < 0) left += mq.weight[i];
  EXPECT_NEAR(left, 0.5, 1e-6);
}

TEST(PeriodicParity, ConservedAndMatchesFock) {
  const auto p = trap346(1050.0);
  PeriodicRabiModel m(p, 1024);
  const auto st0 = prepare_periodic_initial(InitialStateKind::qubit_excited, p, 1024);
  std::vector<double> times{0, 100e-6, 300e-6};
  const auto traj = evolve_periodic_series(m, st0, times, 0.1e-6);
  for (const auto& r : traj) EXPECT_NEAR(r.parity, 1.0, 1e-8);
}
