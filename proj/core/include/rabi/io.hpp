#pragma once

// Run configuration and result files.
//
// A configuration is a JSON object; command-line flags are applied on top of
// it key by key. Every CSV written gets a JSON sidecar with the resolved
// configuration, so a data file is never separated from its provenance.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rabi/params.hpp"
#include "rabi/scenarios.hpp"

namespace rabi {

class ConfigError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kTrajectoryHeader =
    "t_us,N,x_um,q_hbar_k,sigma_x,sigma_z,parity,norm,energy_hbar_omega";

inline constexpr std::string_view kDeviationHeader =
    "label,observable,window_end_us,max_abs,range,relative,tolerance,pass";

struct RunConfig {
  std::string scenario;
  std::optional<double> omega_hz;
  std::vector<double> omega_q_hz;      // one value, or an axis
  std::vector<double> g_over_omega;    // one value, or an axis
  std::optional<double> lambda_nm;
  std::string atom = "Rb87";
  std::optional<int> n_max;
  std::optional<int> n_q;
  std::optional<int> n_x;
  std::optional<double> dt_us;
  std::optional<double> tmax_us;
  std::optional<std::string> model;
  std::optional<std::string> initial;
  std::optional<double> psf_um;
  std::optional<int> samples_per_period;
  std::string output = "out";
};

using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Parses a JSON object and applies the overrides (key, raw value); a raw
/// value is read as JSON when it parses, otherwise as a string. Throws
/// ConfigError naming the offending key.
RunConfig parse_config(std::string_view json_text, const ConfigOverrides& overrides = {});

/// As parse_config, reading the file when one is given.
RunConfig load_config(const std::optional<std::filesystem::path>& file,
                      const ConfigOverrides& overrides = {});

/// Builds and validates the scenario spec. A lone g_over_omega fixes the trap
/// frequency; given together with omega_hz the two must agree within 1%.
ScenarioSpec resolve(const RunConfig& cfg);

/// Resolved configuration as a JSON object string (deterministic key order).
std::string resolved_config_json(const ScenarioSpec& spec, const RunConfig& cfg);

void write_trajectory_csv(std::ostream& os, const Trajectory& records,
                          const ExperimentParams& params);
void write_grid_csv(std::ostream& os, const SweepGrid& grid);

/// Writes every series, grid and deviation table of `result` with sidecars
/// into `dir` (created if needed). Returns the CSV paths in write order.
std::vector<std::filesystem::path> write_results(const ScenarioResult& result,
                                                 const ScenarioSpec& spec, const RunConfig& cfg,
                                                 const std::filesystem::path& dir);

/// Reads a CSV of numbers. With `header`, the first line is returned there
/// instead of being parsed.
std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                  std::string* header = nullptr);

std::string format_number(double v);

}  // namespace rabi
