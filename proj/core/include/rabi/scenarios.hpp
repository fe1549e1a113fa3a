#pragma once

// Reproductions of the measurement protocols: time series and sweep grids
// produced by the QRM, periodic and full-lattice engines.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rabi/observables.hpp"
#include "rabi/params.hpp"
#include "rabi/qrm_fock.hpp"

namespace rabi {

enum class ModelKind { qrm, periodic, lattice };

std::string to_string(ModelKind m);
std::string to_string(InitialStateKind k);
ModelKind parse_model(std::string_view s);
InitialStateKind parse_initial(std::string_view s);

struct Numerics {
  int n_max = 0;                       // 0: choose_truncation
  int n_q = 1024;
  int n_x = 8192;
  double lattice_half_extent = 40e-6;  // m
  double dt = 0;                       // s, 0: default_step
  int samples_per_period = 64;
  double psf_fwhm = 6.5e-6;            // m, 0 disables detection blur
  unsigned threads = 0;                // 0: hardware concurrency
};

/// Split-step size used when Numerics::dt is 0. Zero for the QRM, which is
/// propagated exactly.
double default_step(ModelKind model, const ExperimentParams& params, const Numerics& num);

/// 0, T/s, 2T/s, ... up to t_max with T = 2 pi / omega; t_max is appended
/// when it does not fall on the grid.
std::vector<double> time_grid(const ExperimentParams& params, double t_max,
                              int samples_per_period = 64);

struct Series {
  std::string label;
  ModelKind model = ModelKind::qrm;
  InitialStateKind initial = InitialStateKind::band_minus2hk;
  ExperimentParams params = ExperimentParams::from_hz(346.0, 0.0);
  int n_max = 0;    // resolved Fock cutoff (qrm only)
  double dt = 0;    // resolved step (split-step models only)
  Trajectory records;
};

Series run_series(std::string label, ModelKind model, const ExperimentParams& params,
                  InitialStateKind initial, const std::vector<double>& times,
                  const Numerics& num);

/// values[r * cols.size() + c]
struct SweepGrid {
  std::string name;
  std::string quantity;
  std::string row_axis;
  std::string col_axis;
  std::vector<double> rows;
  std::vector<double> cols;
  std::vector<double> values;

  double at(std::size_t r, std::size_t c) const { return values[r * cols.size() + c]; }
};

/// Maximum deviation of one observable between two trajectories on a time
/// window, relative to the dynamic range (max - min over both, floored).
struct Deviation {
  std::string label;
  std::string observable;
  double window_end = 0;  // s
  double max_abs = 0;
  double range = 0;
  double relative = 0;
  double tolerance = 0;
  bool pass = true;
};

struct ObservableField {
  const char* name;
  double ObservableRecord::*member;
};

/// N, x, q, sigma_x, sigma_z, parity.
const std::vector<ObservableField>& shared_observables();
/// shared_observables plus norm and energy.
const std::vector<ObservableField>& all_observables();

/// Natural scale of an observable, used as the floor of a dynamic range:
/// 1 quantum, x_ho, hbar k, hbar omega, 1 for the bounded ones.
double observable_floor(std::string_view name, const ExperimentParams& params);

std::vector<Deviation> compare_trajectories(const Trajectory& a, const Trajectory& b,
                                            const ExperimentParams& params, double window_end,
                                            const std::vector<ObservableField>& fields,
                                            double tolerance = 0.0);

struct ScenarioSpec {
  std::string id;
  ModelKind model = ModelKind::qrm;
  ExperimentParams params = ExperimentParams::from_hz(346.0, 0.0);
  InitialStateKind initial = InitialStateKind::band_minus2hk;
  double t_max = 0;                      // s, 0: scenario default
  std::vector<double> omega_q_values;    // rad/s, empty: scenario default
  std::vector<double> g_over_omega_values;
  Numerics numerics;
};

struct ScenarioResult {
  std::string id;
  std::vector<Series> series;
  std::vector<SweepGrid> grids;
  std::vector<Deviation> deviations;

  const Series& find(std::string_view label) const;
};

inline const std::vector<std::string> kScenarioIds = {
    "fig2a", "fig2b", "fig3", "fig4a", "fig4b", "fig4cd", "m1", "oracle_compare"};

/// Spec pre-filled with the parameters quoted for the scenario.
ScenarioSpec default_spec(std::string_view id);

ScenarioResult run_fig2a(const ScenarioSpec& spec);
ScenarioResult run_fig2b(const ScenarioSpec& spec);
ScenarioResult run_fig3(const ScenarioSpec& spec);
ScenarioResult run_fig4a(const ScenarioSpec& spec);
ScenarioResult run_fig4b(const ScenarioSpec& spec);
ScenarioResult run_fig4cd(const ScenarioSpec& spec);
ScenarioResult run_m1(const ScenarioSpec& spec);
ScenarioResult oracle_compare(const ScenarioSpec& spec);

/// Dispatch on spec.id.
ScenarioResult run_scenario(const ScenarioSpec& spec);

/// Single trajectory with spec.model, spec.params and spec.initial.
ScenarioResult run_evolve(const ScenarioSpec& spec);

enum class SweepAxis { omega_q, g_over_omega };
/// One trajectory per axis value, plus grids of N and sigma_x over (t, axis).
ScenarioResult run_sweep(const ScenarioSpec& spec, SweepAxis axis);

}  // namespace rabi
