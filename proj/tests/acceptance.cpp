// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Reference numbers come from tests/oracle.hpp, not from the library.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "rabi/analytic.hpp"
#include "rabi/scenarios.hpp"

using namespace rabi;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = lo + (hi - lo) * i / (n - 1);
  return t;
}

double field(const ObservableRecord& r, std::string_view name) {
  for (const auto& f : all_observables()) {
    if (name == f.name) return r.*(f.member);
  }
  return 0.0;
}

// Largest deviation over rows of a comparison, with the row that produced it.
const Deviation* worst(const std::vector<Deviation>& rows, std::string_view label_prefix,
                       double window_end, std::string_view only = {}) {
  const Deviation* w = nullptr;
  for (const auto& d : rows) {
    if (d.label.rfind(label_prefix, 0) != 0) continue;
    if (std::abs(d.window_end - window_end) > 1e-12) continue;
    if (!only.empty() && d.observable != only) continue;
    if (!w || d.relative > w->relative) w = &d;
  }
  return w;
}

// Shared state between criteria: the fig3 parameter sets through all three engines.
const ScenarioResult& fig3_hierarchy() {
  static const ScenarioResult r = [] {
    auto spec = default_spec("oracle_compare");
    for (double hz : {0.0, 586.0, 1660.0, 3600.0}) spec.omega_q_values.push_back(oracle::omega(hz));
    return oracle_compare(spec);
  }();
  return r;
}

Outcome coupling() {
  const auto p = ExperimentParams::from_hz(346.0, 0.0);
  const double g_hz = rad_to_hz(p.g());
  const double ratio = p.g_over_omega();
  const double oracle_hz = oracle::coupling(oracle::omega(346.0)) / (2 * kPi);
  const bool ok = std::abs(g_hz - 2275.0) <= 50.0 && std::abs(ratio - 6.58) <= 0.07 &&
                  std::abs(g_hz - oracle_hz) <= 1e-9 * oracle_hz;
  return {ok, fmt("g/2pi = %.1f Hz (oracle %.1f), g/omega = %.4f", g_hz, oracle_hz, ratio)};
}

Outcome analytic_equivalence() {
  double worst_rel = 0.0;
  double worst_peak = 0.0;
  std::string peaks;
  for (double alpha : {1.0, 3.0, 6.58}) {
    const auto p = ExperimentParams::from_coupling_ratio(alpha, 0.0);
    QrmHamiltonian h(p, choose_truncation(p));
    const auto times = linspace(0.0, 2 * kPi / p.omega(), 1025);
    const auto traj = evolve_series(h, prepare_state(InitialStateKind::band_minus2hk, h.n_max()), times);
    double peak = 0.0;
    for (const auto& r : traj) {
      const double exact = oracle::n_closed(alpha, p.omega() * r.t);
      // relative where N is resolvable, absolute near the revivals
      const double err = exact >= 1e-3 ? std::abs(r.N - exact) / exact : std::abs(r.N - exact) / 1e-3;
      worst_rel = std::max(worst_rel, err);
      peak = std::max(peak, r.N);
    }
    // the sample grid contains t = pi / omega
    const double want = 4 * alpha * alpha;
    worst_peak = std::max(worst_peak, std::abs(peak - want) / want);
    peaks += fmt(" %.4g", peak);
  }
  return {worst_rel <= 1e-6 && worst_peak <= 1e-6,
          fmt("max rel err %.2e, peak N%s, peak rel err %.2e", worst_rel, peaks.c_str(), worst_peak)};
}

Outcome conservation() {
  std::vector<ScenarioResult> results;
  for (const auto& id : kScenarioIds) {
    if (id == "oracle_compare") continue;
    results.push_back(run_scenario(default_spec(id)));
  }
  results.push_back(fig3_hierarchy());
  std::size_t n_traj = 0;
  double d_norm = 0, d_energy = 0, d_parity = 0, d_sx = 0;
  std::string where;
  for (const auto& res : results) {
    for (const auto& s : res.series) {
      if (s.records.empty()) continue;
      ++n_traj;
      const auto& r0 = s.records.front();
      const double hw = s.params.hbar() * s.params.omega();
      const double e_scale = std::max(hw, std::abs(r0.energy));
      const bool frozen_sx = s.params.omega_q() == 0.0 && s.model == ModelKind::qrm;
      for (const auto& r : s.records) {
        d_norm = std::max(d_norm, std::abs(r.norm - r0.norm));
        const double de = std::abs(r.energy - r0.energy) / e_scale;
        if (de > d_energy) {
          d_energy = de;
          where = res.id + "/" + s.label;
        }
        d_parity = std::max(d_parity, std::abs(r.parity - r0.parity));
        if (frozen_sx) d_sx = std::max(d_sx, std::abs(r.sigma_x - r0.sigma_x));
      }
    }
  }
  const bool ok = d_norm <= 1e-10 && d_energy <= 1e-10 && d_parity <= 1e-10 && d_sx <= 1e-10;
  return {ok, fmt("%zu trajectories; max drift norm %.1e, energy %.1e (rel, worst %s), parity %.1e, "
                  "sigma_x at omega_q=0 %.1e",
                  n_traj, d_norm, d_energy, where.c_str(), d_parity, d_sx)};
}

Outcome gauge_equivalence() {
  double worst = 0.0;
  for (double hz : {0.0, 586.0, 1660.0, 3600.0}) {
    const auto p = ExperimentParams::from_hz(346.0, hz);
    const int n_max = choose_truncation(p);
    QrmHamiltonian h1(p, n_max);
    QrmHamiltonian h3(p, n_max, CouplingGauge::position_quadrature);
    const auto times = linspace(0.0, 2 * kPi / p.omega(), 257);
    for (auto kind : {InitialStateKind::band_minus2hk, InitialStateKind::qubit_ground}) {
      // Fock-diagonal initial states are invariant under the mode rotation.
      const auto psi0 = prepare_state(kind, n_max);
      const auto a = evolve_series(h1, psi0, times);
      const auto b = evolve_series(h3, psi0, times);
      for (const char* name : {"N", "sigma_z", "sigma_x"}) {
        double lo = 1e300, hi = -1e300, dev = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
          const double va = field(a[i], name);
          lo = std::min(lo, va);
          hi = std::max(hi, va);
          dev = std::max(dev, std::abs(va - field(b[i], name)));
        }
        worst = std::max(worst, dev / std::max(1.0, hi - lo));
      }
    }
  }
  return {worst <= 1e-10, fmt("max |delta| / max(1, range) over N, sigma_z, sigma_x: %.2e", worst)};
}

Outcome displacement() {
  const auto p = ExperimentParams::from_hz(346.0, 0.0);
  QrmHamiltonian h(p, choose_truncation(p));
  const auto times = linspace(0.0, 2 * kPi / p.omega(), 1025);
  const auto traj = evolve_series(h, prepare_state(InitialStateKind::band_minus2hk, h.n_max()), times);
  double peak = 0.0;
  for (const auto& r : traj) peak = std::max(peak, std::abs(r.x));
  const double x_ho = oracle::x_ho(p.omega());
  const double x_m0 = oracle::x_m0(p.omega());
  const double from_ratio = p.g_over_omega() * x_ho;
  const bool ok = std::abs(x_ho - 0.82e-6) <= 0.01e-6 && std::abs(peak - x_m0) <= 0.02 * x_m0 &&
                  std::abs(peak - 5.4e-6) <= 0.02 * 5.4e-6 && std::abs(from_ratio - x_m0) <= 1e-9 * x_m0;
  return {ok, fmt("x_ho = %.4f um, peak |x| = %.4f um, x_m0 = %.4f um, (g/omega) x_ho = %.4f um",
                  x_ho * 1e6, peak * 1e6, x_m0 * 1e6, from_ratio * 1e6)};
}

Outcome hierarchy() {
  const auto& r = fig3_hierarchy();
  const auto p = default_spec("oracle_compare").params;
  const double te = characteristic_scales(p).t_edge;
  bool ok = true;
  std::string detail;
  for (double hz : {0.0, 586.0, 1660.0, 3600.0}) {
    const std::string tag = fmt("_omega_q_%gHz", hz);
    const auto* early = worst(r.deviations, "qrm_vs_periodic" + tag, 0.5 * te);
    const auto* edge_q = worst(r.deviations, "qrm_vs_periodic" + tag, te, "q");
    // every shared observable, against the dynamic range
    double lat_dyn = 0.0;
    std::string lat_obs;
    const auto& per = r.find("periodic" + tag);
    const auto& lat = r.find("lattice" + tag);
    for (const auto& d : compare_trajectories(per.records, lat.records, per.params, te, shared_observables())) {
      if (d.relative > lat_dyn) {
        lat_dyn = d.relative;
        lat_obs = d.observable;
      }
    }
    const bool here = early && edge_q && early->relative <= 0.02 && edge_q->relative > 0.05 && lat_dyn <= 0.05;
    ok = ok && here;
    detail += fmt("%s%g Hz: early %.1e (%s), q at edge %.2f, lattice %.3f (%s)", detail.empty() ? "" : "; ", hz,
                  early ? early->relative : -1.0, early ? early->observable.c_str() : "?",
                  edge_q ? edge_q->relative : -1.0, lat_dyn, lat_obs.c_str());
  }
  return {ok, detail};
}

Outcome collapse() {
  const auto p = ExperimentParams::from_hz(346.0, 0.0);
  QrmHamiltonian h(p, choose_truncation(p));
  const auto times = linspace(0.0, 722e-6, 1445);
  const auto traj = evolve_series(h, prepare_state(InitialStateKind::qubit_ground, h.n_max()), times);
  const double a2 = p.g_over_omega() * p.g_over_omega();
  double in_window = 0.0, vs_oracle = 0.0;
  for (const auto& r : traj) {
    const double s = std::sin(0.5 * p.omega() * r.t);
    vs_oracle = std::max(vs_oracle, std::abs(r.sigma_z + std::exp(-8 * a2 * s * s)));
    if (r.t >= 150e-6 && r.t <= 500e-6) in_window = std::max(in_window, std::abs(r.sigma_z));
  }
  return {in_window < 0.02 && vs_oracle <= 1e-6,
          fmt("max |sigma_z| on [150, 500] us = %.2e, max |delta| vs branch overlap = %.2e", in_window, vs_oracle)};
}

Outcome initial_state_sensitivity() {
  auto spec = default_spec("fig4cd");
  spec.omega_q_values = {0.0, oracle::omega(4660.0)};
  spec.t_max = 2 * kPi / spec.params.omega();
  spec.numerics.samples_per_period = 512;
  const auto r = run_fig4cd(spec);
  const auto& g = r.grids.at(0);
  const double te = characteristic_scales(spec.params).t_edge;
  double zero_dev = 0.0, max_diff = -1e300, max_abs = 0.0, at = 0.0;
  for (std::size_t i = 0; i < g.rows.size(); ++i) {
    zero_dev = std::max(zero_dev, std::abs(g.at(i, 0)));
    if (g.rows[i] * 1e-6 <= te * (1 + 1e-12)) {
      if (g.at(i, 1) > max_diff) {
        max_diff = g.at(i, 1);
        at = g.rows[i];
      }
      max_abs = std::max(max_abs, std::abs(g.at(i, 1)));
    }
  }
  return {zero_dev <= 1e-10 && max_diff > 5.0,
          fmt("omega_q=0: max |N_e - N_g| = %.1e; 4660 Hz, g/omega %.3f: max N_e - N_g = %.2f at %.0f us "
              "(max |.| %.2f)",
              zero_dev, spec.params.g_over_omega(), max_diff, at, max_abs)};
}

Outcome convergence() {
  const auto p = ExperimentParams::from_hz(346.0, 586.0);
  const double te = characteristic_scales(p).t_edge;
  const auto times = time_grid(p, te, 64);
  const auto init = InitialStateKind::band_minus2hk;
  const Numerics base;

  struct Variant {
    const char* name;
    ModelKind model;
    std::function<void(Numerics&)> change;
  };
  const std::vector<Variant> variants = {
      {"qrm n_max x2", ModelKind::qrm, [&](Numerics& n) { n.n_max = 2 * choose_truncation(p); }},
      {"periodic n_q x2", ModelKind::periodic, [](Numerics& n) { n.n_q *= 2; }},
      {"periodic dt /2", ModelKind::periodic,
       [&](Numerics& n) { n.dt = 0.5 * default_step(ModelKind::periodic, p, base); }},
      {"lattice n_x x2", ModelKind::lattice, [](Numerics& n) { n.n_x *= 2; }},
      {"lattice dt /2", ModelKind::lattice,
       [&](Numerics& n) { n.dt = 0.5 * default_step(ModelKind::lattice, p, base); }},
  };
  Trajectory ref[3];
  bool ok = true;
  std::string detail;
  for (const auto& v : variants) {
    auto& r0 = ref[static_cast<int>(v.model)];
    if (r0.empty()) r0 = run_series("", v.model, p, init, times, base).records;
    Numerics n = base;
    v.change(n);
    const auto r1 = run_series("", v.model, p, init, times, n).records;
    const auto rows = compare_trajectories(r0, r1, p, te, all_observables());
    const Deviation* w = &rows.front();
    for (const auto& d : rows) {
      if (d.relative > w->relative) w = &d;
    }
    ok = ok && w->relative < 1e-5;
    detail += fmt("%s%s %.1e (%s)", detail.empty() ? "" : "; ", v.name, w->relative, w->observable.c_str());
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"coupling formula", coupling},
      {"analytic oracle equivalence", analytic_equivalence},
      {"conservation suite", conservation},
      {"gauge equivalence", gauge_equivalence},
      {"displacement geometry", displacement},
      {"model hierarchy agreement", hierarchy},
      {"sigma_z collapse", collapse},
      {"initial-state sensitivity", initial_state_sensitivity},
      {"convergence", convergence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
