#include "rabi/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "rabi/analytic.hpp"
#include "rabi/detection.hpp"
#include "rabi/lattice.hpp"
#include "rabi/periodic.hpp"

namespace rabi {

namespace {

constexpr double kPeriodicStepCap = 0.1e-6;  // s
constexpr double kLatticeStepCap = 0.05e-6;  // s
constexpr double kMaxPhasePerStep = 0.02;

// Runs fn(0..n-1) on a pool of threads. Results are stored by index, so the
// output order never depends on scheduling.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, unsigned threads, F&& fn) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  unsigned pool = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  pool = static_cast<unsigned>(std::min<std::size_t>(pool, n));
  if (pool <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(pool);
  for (unsigned w = 0; w < pool; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          out[i] = fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::string hz_label(double omega) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6gHz", rad_to_hz(omega));
  return buf;
}

double t_edge(const ExperimentParams& p) { return characteristic_scales(p).t_edge; }

double scenario_t_max(const ScenarioSpec& spec, double fallback) {
  return spec.t_max > 0.0 ? spec.t_max : fallback;
}

std::vector<double> hz_list(std::initializer_list<double> hz) {
  std::vector<double> out;
  for (double v : hz) out.push_back(hz_to_rad(v));
  return out;
}

std::vector<double> omega_q_axis(const ScenarioSpec& spec, std::initializer_list<double> fallback_hz) {
  return spec.omega_q_values.empty() ? hz_list(fallback_hz) : spec.omega_q_values;
}

std::vector<double> microseconds(const std::vector<double>& t) {
  std::vector<double> out;
  out.reserve(t.size());
  for (double v : t) out.push_back(v * 1e6);
  return out;
}

std::vector<double> hertz(const std::vector<double>& w) {
  std::vector<double> out;
  out.reserve(w.size());
  for (double v : w) out.push_back(rad_to_hz(v));
  return out;
}

// Weights of an initial spinor on the sigma_x branches (+, -).
std::pair<double, double> branch_weights(InitialStateKind kind) {
  const double r = std::numbers::sqrt2 / 2.0;
  switch (kind) {
    case InitialStateKind::band_minus2hk: return {1.0, 0.0};
    case InitialStateKind::band_plus2hk: return {0.0, 1.0};
    case InitialStateKind::qubit_excited: return {r, r};
    case InitialStateKind::qubit_ground: return {r, -r};
  }
  return {0.0, 0.0};
}

// Closed-form observables at omega_q = 0 in the phase-quadrature frame.
Trajectory analytic_trajectory(const ExperimentParams& p, InitialStateKind initial,
                               const std::vector<double>& times) {
  if (p.omega_q() != 0.0) throw ParameterError("analytic solution requires omega_q = 0");
  const auto [wp, wm] = branch_weights(initial);
  const double alpha = p.g_over_omega();
  const double x_zpf = std::sqrt(p.hbar() / (2.0 * p.mass() * p.omega()));
  const double q_zpf = std::sqrt(p.hbar() * p.mass() * p.omega() / 2.0);
  Trajectory out;
  for (double t : times) {
    const auto plus = analytic::branch_trajectory({alpha, Branch::plus}, p.omega(), t);
    const auto minus = analytic::branch_trajectory({alpha, Branch::minus}, p.omega(), t);
    const cplx a_mean = wp * wp * plus.amplitude + wm * wm * minus.amplitude;
    const double n = analytic::n_expectation_closed_form(alpha, p.omega(), t);
    ObservableRecord r;
    r.t = t;
    r.N = n;
    r.x = 2.0 * x_zpf * a_mean.real();
    r.q = 2.0 * q_zpf * a_mean.imag();
    r.sigma_x = wp * wp - wm * wm;
    r.sigma_z = 2.0 * wp * wm * std::exp(-2.0 * n);
    r.parity = 2.0 * wp * wm;
    r.norm = 1.0;
    r.energy = 0.0;
    out.push_back(r);
  }
  return out;
}

Series make_series(std::string label, ModelKind model, const ExperimentParams& params,
                   InitialStateKind initial) {
  Series s;
  s.label = std::move(label);
  s.model = model;
  s.params = params;
  s.initial = initial;
  return s;
}

// QRM trajectory that also hands each evolved state to `visit`.
template <class Visit>
Series qrm_series(std::string label, const ExperimentParams& params, InitialStateKind initial,
                  const std::vector<double>& times, const Numerics& num, Visit&& visit) {
  Series s = make_series(std::move(label), ModelKind::qrm, params, initial);
  s.n_max = num.n_max > 0 ? num.n_max : choose_truncation(params);
  QrmHamiltonian h(params, s.n_max);
  QrmPropagator prop(h, prepare_state(initial, s.n_max));
  s.records.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const FockSpinorState psi = prop.at(times[i]);
    check_truncation(psi);
    s.records.push_back(observables(psi, h, times[i]));
    visit(i, psi);
  }
  return s;
}

double mean_of(const std::vector<double>& x, const std::vector<double>& w) {
  double m0 = 0.0;
  double m1 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    m0 += w[i];
    m1 += x[i] * w[i];
  }
  return m0 > 0.0 ? m1 / m0 : 0.0;
}

std::vector<double> uniform_axis(double lo, double hi, double step) {
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

// Position samples wide enough for both branches plus the blur.
std::vector<double> imaging_axis(const ExperimentParams& p, double fwhm) {
  const double half = 2.0 * characteristic_scales(p).x_m0 + 2.0 * fwhm;
  return uniform_axis(-half, half, 0.05e-6);
}

}  // namespace

std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::qrm: return "qrm";
    case ModelKind::periodic: return "periodic";
    case ModelKind::lattice: return "lattice";
  }
  return "?";
}

std::string to_string(InitialStateKind k) {
  switch (k) {
    case InitialStateKind::qubit_ground: return "qubit_ground";
    case InitialStateKind::qubit_excited: return "qubit_excited";
    case InitialStateKind::band_minus2hk: return "band_minus2hk";
    case InitialStateKind::band_plus2hk: return "band_plus2hk";
  }
  return "?";
}

ModelKind parse_model(std::string_view s) {
  if (s == "qrm") return ModelKind::qrm;
  if (s == "periodic") return ModelKind::periodic;
  if (s == "lattice") return ModelKind::lattice;
  throw ParameterError("unknown model '" + std::string(s) + "' (expected qrm, periodic or lattice)");
}

InitialStateKind parse_initial(std::string_view s) {
  for (auto k : {InitialStateKind::qubit_ground, InitialStateKind::qubit_excited,
                 InitialStateKind::band_minus2hk, InitialStateKind::band_plus2hk}) {
    if (s == to_string(k)) return k;
  }
  throw ParameterError("unknown initial state '" + std::string(s) + "'");
}

double default_step(ModelKind model, const ExperimentParams& params, const Numerics& num) {
  if (model == ModelKind::qrm) return 0.0;
  if (num.dt > 0.0) return num.dt;
  const double rate = std::max({params.omega(), params.omega_q(), params.g()});
  const double cap = model == ModelKind::periodic ? kPeriodicStepCap : kLatticeStepCap;
  return std::min(cap, kMaxPhasePerStep / rate);
}

std::vector<double> time_grid(const ExperimentParams& params, double t_max,
                              int samples_per_period) {
  if (!(t_max >= 0.0)) throw ParameterError("t_max must be non-negative");
  if (samples_per_period < 1) throw ParameterError("samples_per_period must be >= 1");
  const double step = 2.0 * std::numbers::pi / params.omega() / samples_per_period;
  std::vector<double> t = uniform_axis(0.0, t_max, step);
  if (t_max - t.back() > 1e-9 * step) t.push_back(t_max);
  return t;
}

Series run_series(std::string label, ModelKind model, const ExperimentParams& params,
                  InitialStateKind initial, const std::vector<double>& times,
                  const Numerics& num) {
  switch (model) {
    case ModelKind::qrm:
      return qrm_series(std::move(label), params, initial, times, num,
                        [](std::size_t, const FockSpinorState&) {});
    case ModelKind::periodic: {
      Series s = make_series(std::move(label), model, params, initial);
      s.dt = default_step(model, params, num);
      PeriodicRabiModel m(params, num.n_q);
      s.records = evolve_periodic_series(m, prepare_periodic_initial(initial, params, num.n_q),
                                         times, s.dt);
      return s;
    }
    case ModelKind::lattice: {
      Series s = make_series(std::move(label), model, params, initial);
      s.dt = default_step(model, params, num);
      LatticeModel m(params, num.n_x, num.lattice_half_extent);
      s.records = evolve_lattice_series(m, prepare_lattice_initial(initial, m), times, s.dt);
      return s;
    }
  }
  throw ParameterError("unknown model");
}

const std::vector<ObservableField>& shared_observables() {
  static const std::vector<ObservableField> f = {
      {"N", &ObservableRecord::N},
      {"x", &ObservableRecord::x},
      {"q", &ObservableRecord::q},
      {"sigma_x", &ObservableRecord::sigma_x},
      {"sigma_z", &ObservableRecord::sigma_z},
      {"parity", &ObservableRecord::parity},
  };
  return f;
}

const std::vector<ObservableField>& all_observables() {
  static const std::vector<ObservableField> f = [] {
    auto v = shared_observables();
    v.push_back({"norm", &ObservableRecord::norm});
    v.push_back({"energy", &ObservableRecord::energy});
    return v;
  }();
  return f;
}

double observable_floor(std::string_view name, const ExperimentParams& p) {
  if (name == "N") return 1.0;
  if (name == "x") return characteristic_scales(p).x_ho;
  if (name == "q") return p.hbar() * p.k();
  if (name == "energy") return p.hbar() * p.omega();
  return 1.0;
}

std::vector<Deviation> compare_trajectories(const Trajectory& a, const Trajectory& b,
                                            const ExperimentParams& params, double window_end,
                                            const std::vector<ObservableField>& fields,
                                            double tolerance) {
  if (a.size() != b.size()) throw std::invalid_argument("trajectories have different lengths");
  std::vector<Deviation> out;
  for (const auto& f : fields) {
    double lo = INFINITY;
    double hi = -INFINITY;
    double dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a[i].t - b[i].t) > 1e-12) throw std::invalid_argument("time grids differ");
      if (a[i].t > window_end * (1.0 + 1e-12)) break;
      const double va = a[i].*f.member;
      const double vb = b[i].*f.member;
      lo = std::min({lo, va, vb});
      hi = std::max({hi, va, vb});
      dev = std::max(dev, std::abs(va - vb));
    }
    Deviation d;
    d.observable = f.name;
    d.window_end = window_end;
    d.max_abs = dev;
    d.range = std::max(hi - lo, observable_floor(f.name, params));
    d.relative = dev / d.range;
    d.tolerance = tolerance;
    d.pass = tolerance <= 0.0 || d.relative <= tolerance;
    out.push_back(d);
  }
  return out;
}

const Series& ScenarioResult::find(std::string_view label) const {
  for (const auto& s : series) {
    if (s.label == label) return s;
  }
  throw std::out_of_range("no series '" + std::string(label) + "' in " + id);
}

ScenarioSpec default_spec(std::string_view id) {
  ScenarioSpec s;
  s.id = std::string(id);
  if (id == "fig4b" || id == "fig4cd") {
    s.params = ExperimentParams::from_coupling_ratio(6.5, 0.0);
  } else if (id == "m1") {
    s.params = ExperimentParams::from_coupling_ratio(6.5, hz_to_rad(2380.0));
    s.initial = InitialStateKind::qubit_excited;
  } else if (id == "fig4a") {
    s.initial = InitialStateKind::qubit_ground;
  }
  return s;
}

ScenarioResult run_fig2a(const ScenarioSpec& spec) {
  const auto wq = omega_q_axis(spec, {586.0, 5200.0});
  const auto times = time_grid(spec.params, scenario_t_max(spec, t_edge(spec.params)),
                               spec.numerics.samples_per_period);
  ScenarioResult r{spec.id, {}, {}, {}};
  r.series = parallel_map<Series>(wq.size(), spec.numerics.threads, [&](std::size_t i) {
    return run_series("omega_q_" + hz_label(wq[i]), spec.model, spec.params.with_omega_q(wq[i]),
                      spec.initial, times, spec.numerics);
  });
  return r;
}

ScenarioResult run_fig2b(const ScenarioSpec& spec) {
  const auto wq = omega_q_axis(spec, {590.0, 5850.0});
  std::vector<double> ratios = spec.g_over_omega_values;
  if (ratios.empty()) ratios = uniform_axis(0.5, 7.0, 0.5);
  SweepGrid g{"fig2b_N", "N", "g_over_omega", "omega_q_hz", ratios, hertz(wq), {}};
  const std::size_t cols = wq.size();
  g.values = parallel_map<double>(ratios.size() * cols, spec.numerics.threads, [&](std::size_t k) {
    const auto p = ExperimentParams::from_coupling_ratio(ratios[k / cols], wq[k % cols],
                                                         spec.params.lambda(),
                                                         spec.params.constants());
    const double t = 3.0 * std::numbers::pi / (8.0 * p.omega());
    Numerics num = spec.numerics;
    if (spec.model == ModelKind::qrm) num.n_max = 0;  // each point sizes its own cutoff
    return run_series("", spec.model, p, spec.initial, {0.0, t}, num).records.back().N;
  });
  ScenarioResult r{spec.id, {}, {}, {}};
  r.grids.push_back(std::move(g));
  return r;
}

ScenarioResult run_fig3(const ScenarioSpec& spec) {
  const auto wq = omega_q_axis(spec, {0.0, 586.0, 1660.0, 3600.0});
  const auto times = time_grid(spec.params, scenario_t_max(spec, t_edge(spec.params)),
                               spec.numerics.samples_per_period);
  const double fwhm = spec.numerics.psf_fwhm;
  const auto xs = imaging_axis(spec.params, fwhm);

  struct Job {
    Series series;
    SweepGrid density;
    std::vector<double> x_psf;
  };
  const std::size_t n = wq.size();
  auto jobs = parallel_map<Job>(2 * n, spec.numerics.threads, [&](std::size_t k) {
    const auto p = spec.params.with_omega_q(wq[k % n]);
    Job job;
    if (k >= n) {
      job.series = run_series("periodic_omega_q_" + hz_label(wq[k % n]), ModelKind::periodic, p,
                              spec.initial, times, spec.numerics);
      return job;
    }
    const std::string tag = "omega_q_" + hz_label(wq[k]);
    job.density = {"fig3_density_" + tag, "density_per_um", "t_us", "x_um",
                   microseconds(times), microseconds(xs), {}};
    job.series = qrm_series("qrm_" + tag, p, spec.initial, times, spec.numerics,
                            [&](std::size_t, const FockSpinorState& psi) {
                              if (fwhm <= 0.0) return;
                              auto rho = psf_convolve(xs, position_density(psi, p, xs), fwhm);
                              job.x_psf.push_back(mean_of(xs, rho));
                              for (double v : rho) job.density.values.push_back(v * 1e-6);
                            });
    return job;
  });

  ScenarioResult r{spec.id, {}, {}, {}};
  SweepGrid x_psf{"fig3_x_psf", "x_um", "t_us", "omega_q_hz", microseconds(times), hertz(wq), {}};
  for (std::size_t i = 0; i < times.size() && fwhm > 0.0; ++i) {
    for (std::size_t c = 0; c < n; ++c) x_psf.values.push_back(jobs[c].x_psf[i] * 1e6);
  }
  for (std::size_t c = 0; c < n; ++c) {
    r.series.push_back(std::move(jobs[c].series));
    r.series.push_back(std::move(jobs[n + c].series));
  }
  if (fwhm > 0.0) {
    r.grids.push_back(std::move(x_psf));
    for (std::size_t c = 0; c < n; ++c) r.grids.push_back(std::move(jobs[c].density));
  }
  return r;
}

ScenarioResult run_fig4a(const ScenarioSpec& spec) {
  const auto wq = omega_q_axis(spec, {0.0, 1050.0});
  const auto times = time_grid(spec.params, scenario_t_max(spec, 700e-6),
                               spec.numerics.samples_per_period);
  const InitialStateKind kinds[] = {InitialStateKind::qubit_ground, InitialStateKind::qubit_excited};
  ScenarioResult r{spec.id, {}, {}, {}};
  r.series = parallel_map<Series>(2 * wq.size(), spec.numerics.threads, [&](std::size_t k) {
    const auto kind = kinds[k % 2];
    const std::string who = kind == InitialStateKind::qubit_ground ? "ground" : "excited";
    return run_series(who + "_omega_q_" + hz_label(wq[k / 2]), spec.model,
                      spec.params.with_omega_q(wq[k / 2]), kind, times, spec.numerics);
  });
  return r;
}

ScenarioResult run_fig4b(const ScenarioSpec& spec) {
  auto wq = omega_q_axis(spec, {4660.0});
  if (std::find(wq.begin(), wq.end(), 0.0) == wq.end()) wq.insert(wq.begin(), 0.0);
  ScenarioSpec s = spec;
  s.omega_q_values = wq;
  s.t_max = scenario_t_max(spec, t_edge(spec.params));
  ScenarioResult r = run_fig4a(s);
  r.id = spec.id;
  return r;
}

ScenarioResult run_fig4cd(const ScenarioSpec& spec) {
  std::vector<double> wq = spec.omega_q_values;
  if (wq.empty()) {
    for (double hz : uniform_axis(0.0, 5500.0, 250.0)) wq.push_back(hz_to_rad(hz));
  }
  const auto times = time_grid(spec.params, scenario_t_max(spec, t_edge(spec.params)),
                               spec.numerics.samples_per_period);
  auto columns = parallel_map<std::vector<double>>(wq.size(), spec.numerics.threads,
                                                   [&](std::size_t c) {
    const auto p = spec.params.with_omega_q(wq[c]);
    std::vector<double> diff(times.size());
    if (spec.model == ModelKind::qrm) {
      // One diagonalisation serves both initial states.
      const int n_max = spec.numerics.n_max > 0 ? spec.numerics.n_max : choose_truncation(p);
      QrmHamiltonian h(p, n_max);
      QrmPropagator pe(h, prepare_state(InitialStateKind::qubit_excited, n_max));
      QrmPropagator pg(h, prepare_state(InitialStateKind::qubit_ground, n_max));
      for (std::size_t i = 0; i < times.size(); ++i) {
        const auto se = pe.at(times[i]);
        const auto sg = pg.at(times[i]);
        check_truncation(se);
        check_truncation(sg);
        diff[i] = observables(se, h, times[i]).N - observables(sg, h, times[i]).N;
      }
    } else {
      const auto e = run_series("", spec.model, p, InitialStateKind::qubit_excited, times,
                                spec.numerics);
      const auto g = run_series("", spec.model, p, InitialStateKind::qubit_ground, times,
                                spec.numerics);
      for (std::size_t i = 0; i < times.size(); ++i) diff[i] = e.records[i].N - g.records[i].N;
    }
    return diff;
  });
  SweepGrid g{"fig4cd_dN", "N_e_minus_N_g", "t_us", "omega_q_hz", microseconds(times), hertz(wq),
              {}};
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t c = 0; c < wq.size(); ++c) g.values.push_back(columns[c][i]);
  }
  ScenarioResult r{spec.id, {}, {}, {}};
  r.grids.push_back(std::move(g));
  return r;
}

ScenarioResult run_m1(const ScenarioSpec& spec) {
  const auto& p = spec.params;
  const auto times = uniform_axis(0.0, scenario_t_max(spec, 300e-6), 50e-6);
  const double fwhm = spec.numerics.psf_fwhm;
  const auto xs = imaging_axis(p, std::max(fwhm, 1e-6));

  ScenarioResult r{spec.id, {}, {}, {}};
  SweepGrid real{"m1_real_space", "density_per_um", "t_us", "x_um", microseconds(times),
                 microseconds(xs), {}};
  r.series.push_back(qrm_series("qrm", p, spec.initial, times, spec.numerics,
                                [&](std::size_t, const FockSpinorState& psi) {
                                  auto rho = psf_convolve(xs, position_density(psi, p, xs), fwhm);
                                  for (double v : rho) real.values.push_back(v * 1e-6);
                                }));

  const int n_q = spec.numerics.n_q;
  PeriodicPropagator prop(PeriodicRabiModel(p, n_q), default_step(ModelKind::periodic, p,
                                                                  spec.numerics));
  TwoBandQState st = prepare_periodic_initial(spec.initial, p, n_q);
  SweepGrid mom{"m1_momentum", "probability", "t_us", "p_hbar_k", microseconds(times), {}, {}};
  Series ps = make_series("periodic", ModelKind::periodic, p, spec.initial);
  ps.dt = prop.dt();
  double now = 0.0;
  for (double t : times) {
    prop.advance(st, t - now);
    now = t;
    ps.records.push_back(prop.observe(st, t));
    const auto md = band_mapping(st);
    if (mom.cols.empty()) {
      for (double pp : md.p) mom.cols.push_back(pp / (p.hbar() * p.k()));
    }
    mom.values.insert(mom.values.end(), md.weight.begin(), md.weight.end());
  }
  r.series.push_back(std::move(ps));
  r.grids.push_back(std::move(real));
  r.grids.push_back(std::move(mom));
  return r;
}

ScenarioResult oracle_compare(const ScenarioSpec& spec) {
  const auto wq = omega_q_axis(spec, {0.0, 586.0});
  const double te = t_edge(spec.params);
  const auto times = time_grid(spec.params, scenario_t_max(spec, te),
                               spec.numerics.samples_per_period);
  const ModelKind models[] = {ModelKind::qrm, ModelKind::periodic, ModelKind::lattice};
  auto runs = parallel_map<Series>(3 * wq.size(), spec.numerics.threads, [&](std::size_t k) {
    const auto m = models[k % 3];
    return run_series(to_string(m) + "_omega_q_" + hz_label(wq[k / 3]), m,
                      spec.params.with_omega_q(wq[k / 3]), spec.initial, times, spec.numerics);
  });

  ScenarioResult r{spec.id, {}, {}, {}};
  auto add = [&](const std::string& label, std::vector<Deviation> rows) {
    for (auto& d : rows) {
      d.label = label;
      r.deviations.push_back(std::move(d));
    }
  };
  const auto& shared = shared_observables();
  for (std::size_t c = 0; c < wq.size(); ++c) {
    const auto p = spec.params.with_omega_q(wq[c]);
    const Series& qrm = runs[3 * c];
    const Series& per = runs[3 * c + 1];
    const Series& lat = runs[3 * c + 2];
    const std::string tag = "_omega_q_" + hz_label(wq[c]);
    if (wq[c] == 0.0) {
      Series an = make_series("analytic" + tag, ModelKind::qrm, p, spec.initial);
      an.records = analytic_trajectory(p, spec.initial, times);
      add("analytic_vs_qrm" + tag, compare_trajectories(an.records, qrm.records, p, te, shared, 1e-6));
      r.series.push_back(std::move(an));
    }
    add("qrm_vs_periodic" + tag,
        compare_trajectories(qrm.records, per.records, p, 0.5 * te, shared, 0.02));
    add("qrm_vs_periodic" + tag, compare_trajectories(qrm.records, per.records, p, te, shared));
    // Two-band vs lattice is judged on absolute scales: sigma_x itself and q / 2 hbar k.
    auto rows = compare_trajectories(per.records, lat.records, p, te, shared);
    for (auto& d : rows) {
      if (d.observable == "sigma_x" || d.observable == "q") {
        const double scale = d.observable == "q" ? 2.0 * p.hbar() * p.k() : 1.0;
        d.range = scale;
        d.relative = d.max_abs / scale;
        d.tolerance = 0.05;
        d.pass = d.relative <= d.tolerance;
      }
    }
    add("periodic_vs_lattice" + tag, std::move(rows));
  }
  for (auto& s : runs) r.series.push_back(std::move(s));
  return r;
}

ScenarioResult run_scenario(const ScenarioSpec& spec) {
  if (spec.id == "fig2a") return run_fig2a(spec);
  if (spec.id == "fig2b") return run_fig2b(spec);
  if (spec.id == "fig3") return run_fig3(spec);
  if (spec.id == "fig4a") return run_fig4a(spec);
  if (spec.id == "fig4b") return run_fig4b(spec);
  if (spec.id == "fig4cd") return run_fig4cd(spec);
  if (spec.id == "m1") return run_m1(spec);
  if (spec.id == "oracle_compare") return oracle_compare(spec);
  throw ParameterError("unknown scenario '" + spec.id + "'");
}

ScenarioResult run_evolve(const ScenarioSpec& spec) {
  const auto times = time_grid(spec.params, scenario_t_max(spec, t_edge(spec.params)),
                               spec.numerics.samples_per_period);
  ScenarioResult r{spec.id.empty() ? "evolve" : spec.id, {}, {}, {}};
  r.series.push_back(run_series(to_string(spec.model), spec.model, spec.params, spec.initial,
                                times, spec.numerics));
  return r;
}

ScenarioResult run_sweep(const ScenarioSpec& spec, SweepAxis axis) {
  const bool by_wq = axis == SweepAxis::omega_q;
  const std::vector<double>& values = by_wq ? spec.omega_q_values : spec.g_over_omega_values;
  if (values.empty()) throw ParameterError("sweep axis has no values");
  const auto times = time_grid(spec.params, scenario_t_max(spec, t_edge(spec.params)),
                               spec.numerics.samples_per_period);
  ScenarioResult r{spec.id.empty() ? "sweep" : spec.id, {}, {}, {}};
  r.series = parallel_map<Series>(values.size(), spec.numerics.threads, [&](std::size_t i) {
    char buf[64];
    if (by_wq) {
      std::snprintf(buf, sizeof buf, "omega_q_%s", hz_label(values[i]).c_str());
    } else {
      std::snprintf(buf, sizeof buf, "g_over_omega_%.6g", values[i]);
    }
    // A g/omega sweep retunes the trap, so the time grid is per point.
    const auto p = by_wq ? spec.params.with_omega_q(values[i])
                         : ExperimentParams::from_coupling_ratio(values[i], spec.params.omega_q(),
                                                                 spec.params.lambda(),
                                                                 spec.params.constants());
    const auto t = by_wq ? times
                         : time_grid(p, scenario_t_max(spec, t_edge(p)),
                                     spec.numerics.samples_per_period);
    return run_series(buf, spec.model, p, spec.initial, t, spec.numerics);
  });
  if (by_wq) {
    for (const char* name : {"N", "sigma_x"}) {
      SweepGrid g{std::string("sweep_") + name, name, "t_us", "omega_q_hz", microseconds(times),
                  hertz(values), {}};
      const auto field = std::string(name) == "N" ? &ObservableRecord::N : &ObservableRecord::sigma_x;
      for (std::size_t i = 0; i < times.size(); ++i) {
        for (const auto& s : r.series) g.values.push_back(s.records[i].*field);
      }
      r.grids.push_back(std::move(g));
    }
  }
  return r;
}

}  // namespace rabi
