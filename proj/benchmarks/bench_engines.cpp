#include <benchmark/benchmark.h>

#include "rabi/lattice.hpp"
#include "rabi/periodic.hpp"
#include "rabi/qrm_fock.hpp"

using namespace rabi;

namespace {

const ExperimentParams kParams = ExperimentParams::from_hz(346.0, 586.0);

void BM_QrmDiagonalise(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    QrmHamiltonian h(kParams, n_max);
    benchmark::DoNotOptimize(h.eigenvalues().data());
  }
}
BENCHMARK(BM_QrmDiagonalise)->Arg(100)->Arg(200)->Arg(325)->Unit(benchmark::kMillisecond);

void BM_QrmSample(benchmark::State& state) {
  QrmHamiltonian h(kParams, 325);
  QrmPropagator prop(h, prepare_state(InitialStateKind::band_minus2hk, 325));
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-6;
    auto psi = prop.at(t);
    benchmark::DoNotOptimize(observables(psi, h, t).N);
  }
}
BENCHMARK(BM_QrmSample)->Unit(benchmark::kMicrosecond);

// 100 split steps per iteration
void BM_PeriodicSteps(benchmark::State& state) {
  const int n_q = static_cast<int>(state.range(0));
  PeriodicPropagator prop(PeriodicRabiModel(kParams, n_q), 0.1e-6);
  auto st = prepare_periodic_initial(InitialStateKind::band_minus2hk, kParams, n_q);
  for (auto _ : state) {
    prop.advance(st, 10e-6);
    benchmark::DoNotOptimize(st.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_PeriodicSteps)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_LatticeSteps(benchmark::State& state) {
  const int n_x = static_cast<int>(state.range(0));
  LatticePropagator prop(LatticeModel(kParams, n_x, 40e-6), 0.05e-6);
  auto st = prepare_lattice_initial(InitialStateKind::band_minus2hk, prop.model());
  for (auto _ : state) {
    prop.advance(st, 5e-6);
    benchmark::DoNotOptimize(st.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_LatticeSteps)->Arg(8192)->Arg(16384)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
