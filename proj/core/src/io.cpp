#include "rabi/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rabi {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "scenario", "omega_hz", "omega_q_hz", "g_over_omega", "lambda_nm", "atom",
      "n_max",    "n_q",      "n_x",        "dt_us",        "tmax_us",   "model",
      "initial",  "psf_um",   "samples_per_period",         "output"};
  return keys;
}

[[noreturn]] void key_error(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) key_error(key, "expected a number, got " + v.dump());
  return v.get<double>();
}

int get_int(const json& v, const std::string& key) {
  const double d = get_number(v, key);
  if (d != std::floor(d) || std::abs(d) > 1e9) key_error(key, "expected an integer, got " + v.dump());
  return static_cast<int>(d);
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) key_error(key, "expected a string, got " + v.dump());
  return v.get<std::string>();
}

std::vector<double> get_number_list(const json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array() || v.empty()) key_error(key, "expected a number or a non-empty array");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(get_number(e, key));
  return out;
}

RunConfig from_json(const json& obj) {
  if (!obj.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig c;
  for (const auto& [key, v] : obj.items()) {
    if (!known_keys().contains(key)) key_error(key, "unknown key");
    if (key == "scenario") c.scenario = get_string(v, key);
    else if (key == "omega_hz") c.omega_hz = get_number(v, key);
    else if (key == "omega_q_hz") c.omega_q_hz = get_number_list(v, key);
    else if (key == "g_over_omega") c.g_over_omega = get_number_list(v, key);
    else if (key == "lambda_nm") c.lambda_nm = get_number(v, key);
    else if (key == "atom") c.atom = get_string(v, key);
    else if (key == "n_max") c.n_max = get_int(v, key);
    else if (key == "n_q") c.n_q = get_int(v, key);
    else if (key == "n_x") c.n_x = get_int(v, key);
    else if (key == "dt_us") c.dt_us = get_number(v, key);
    else if (key == "tmax_us") c.tmax_us = get_number(v, key);
    else if (key == "model") c.model = get_string(v, key);
    else if (key == "initial") c.initial = get_string(v, key);
    else if (key == "psf_um") c.psf_um = get_number(v, key);
    else if (key == "samples_per_period") c.samples_per_period = get_int(v, key);
    else if (key == "output") c.output = get_string(v, key);
  }
  return c;
}

std::string model_name(const ScenarioSpec& spec) { return to_string(spec.model); }

json resolved_json(const ScenarioSpec& spec, const RunConfig& cfg) {
  const auto& p = spec.params;
  json j;
  j["scenario"] = spec.id;
  j["atom"] = cfg.atom;
  j["omega_hz"] = rad_to_hz(p.omega());
  j["g_over_omega"] = p.g_over_omega();
  j["g_hz"] = rad_to_hz(p.g());
  j["lambda_nm"] = p.lambda() * 1e9;
  if (spec.omega_q_values.empty()) {
    j["omega_q_hz"] = rad_to_hz(p.omega_q());
  } else {
    json axis = json::array();
    for (double w : spec.omega_q_values) axis.push_back(rad_to_hz(w));
    j["omega_q_hz"] = axis;
  }
  if (!spec.g_over_omega_values.empty()) j["g_over_omega_axis"] = spec.g_over_omega_values;
  j["model"] = model_name(spec);
  j["initial"] = to_string(spec.initial);
  j["n_max"] = spec.numerics.n_max > 0 ? spec.numerics.n_max : choose_truncation(p);
  j["n_q"] = spec.numerics.n_q;
  j["n_x"] = spec.numerics.n_x;
  j["lattice_half_extent_um"] = spec.numerics.lattice_half_extent * 1e6;
  j["dt_us"] = default_step(spec.model, p, spec.numerics) * 1e6;
  j["tmax_us"] = spec.t_max > 0.0 ? json(spec.t_max * 1e6) : json(nullptr);
  j["psf_um"] = spec.numerics.psf_fwhm * 1e6;
  j["samples_per_period"] = spec.numerics.samples_per_period;
  j["output"] = cfg.output;
  return j;
}

json series_json(const Series& s) {
  const auto& p = s.params;
  json j;
  j["label"] = s.label;
  j["model"] = to_string(s.model);
  j["initial"] = to_string(s.initial);
  j["omega_hz"] = rad_to_hz(p.omega());
  j["omega_q_hz"] = rad_to_hz(p.omega_q());
  j["g_over_omega"] = p.g_over_omega();
  j["lambda_nm"] = p.lambda() * 1e9;
  if (s.model == ModelKind::qrm) j["n_max"] = s.n_max;
  else j["dt_us"] = s.dt * 1e6;
  j["samples"] = s.records.size();
  return j;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw OutputError("cannot open " + path.string() + " for writing");
  return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw OutputError("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
  finish(os, path);
}

json trajectory_columns() {
  json cols = json::array();
  std::stringstream ss{std::string(kTrajectoryHeader)};
  for (std::string item; std::getline(ss, item, ',');) cols.push_back(item);
  return cols;
}

// Observables in the units of the CSV header.
double report_value(std::string_view name, double v, const ExperimentParams& p) {
  if (name == "x") return v * 1e6;
  if (name == "q") return v / (p.hbar() * p.k());
  if (name == "energy") return v / (p.hbar() * p.omega());
  return v;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

RunConfig parse_config(std::string_view json_text, const ConfigOverrides& overrides) {
  json obj = json::object();
  const bool blank = json_text.find_first_not_of(" \t\r\n") == std::string_view::npos;
  if (!blank) {
    try {
      obj = json::parse(json_text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("malformed configuration JSON: ") + e.what());
    }
  }
  if (!obj.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, raw] : overrides) {
    json v;
    try {
      v = json::parse(raw);
    } catch (const json::parse_error&) {
      v = raw;
    }
    // Flags that name strings ("qrm", "fig3") parse as JSON only by accident.
    if (key == "scenario" || key == "model" || key == "initial" || key == "atom" ||
        key == "output") {
      v = raw;
    }
    obj[key] = v;
  }
  return from_json(obj);
}

RunConfig load_config(const std::optional<std::filesystem::path>& file,
                      const ConfigOverrides& overrides) {
  if (!file) return parse_config("", overrides);
  std::ifstream is(*file, std::ios::binary);
  if (!is) throw ConfigError("cannot read configuration file " + file->string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), overrides);
}

ScenarioSpec resolve(const RunConfig& cfg) {
  const std::string id = cfg.scenario.empty() ? "evolve" : cfg.scenario;
  const bool known = id == "evolve" || id == "sweep" ||
                     std::find(kScenarioIds.begin(), kScenarioIds.end(), id) != kScenarioIds.end();
  if (!known) key_error("scenario", "unknown scenario '" + id + "'");
  ScenarioSpec spec = default_spec(id);

  if (cfg.atom != "Rb87") key_error("atom", "only Rb87 is supported, got '" + cfg.atom + "'");
  if (cfg.omega_hz && !(*cfg.omega_hz > 0.0)) key_error("omega_hz", "must be positive");
  for (double v : cfg.omega_q_hz) {
    if (!(v >= 0.0)) key_error("omega_q_hz", "must be non-negative");
  }
  for (double v : cfg.g_over_omega) {
    if (!(v > 0.0)) key_error("g_over_omega", "must be positive");
  }
  if (cfg.lambda_nm && !(*cfg.lambda_nm > 0.0)) key_error("lambda_nm", "must be positive");
  if (cfg.n_max && *cfg.n_max < 1) key_error("n_max", "must be >= 1");
  if (cfg.n_q && *cfg.n_q < 64) key_error("n_q", "must be >= 64");
  if (cfg.n_x && (*cfg.n_x < 16 || *cfg.n_x % 2)) key_error("n_x", "must be even and >= 16");
  if (cfg.dt_us && !(*cfg.dt_us > 0.0)) key_error("dt_us", "must be positive");
  if (cfg.tmax_us && !(*cfg.tmax_us > 0.0)) key_error("tmax_us", "must be positive");
  if (cfg.psf_um && !(*cfg.psf_um >= 0.0)) key_error("psf_um", "must be non-negative");
  if (cfg.samples_per_period && *cfg.samples_per_period < 1) {
    key_error("samples_per_period", "must be >= 1");
  }

  const auto& c = spec.params.constants();
  const double lambda = cfg.lambda_nm ? *cfg.lambda_nm * 1e-9 : spec.params.lambda();
  const double omega_q =
      cfg.omega_q_hz.empty() ? spec.params.omega_q() : hz_to_rad(cfg.omega_q_hz.front());
  const bool single_ratio = cfg.g_over_omega.size() == 1;
  if (cfg.omega_hz) {
    spec.params = ExperimentParams::from_trap(hz_to_rad(*cfg.omega_hz), omega_q, lambda, c);
    if (single_ratio) {
      const double want = cfg.g_over_omega.front();
      const double got = spec.params.g_over_omega();
      if (std::abs(got - want) > 0.01 * want) {
        key_error("g_over_omega", "value " + format_number(want) + " inconsistent with omega_hz " +
                                      format_number(*cfg.omega_hz) + " (derived g/omega " +
                                      format_number(got) + ")");
      }
    }
  } else if (single_ratio) {
    spec.params = ExperimentParams::from_coupling_ratio(cfg.g_over_omega.front(), omega_q, lambda, c);
  } else {
    spec.params = ExperimentParams::from_trap(spec.params.omega(), omega_q, lambda, c);
  }

  for (double hz : cfg.omega_q_hz) spec.omega_q_values.push_back(hz_to_rad(hz));
  spec.g_over_omega_values = cfg.g_over_omega;

  try {
    if (cfg.model) spec.model = parse_model(*cfg.model);
  } catch (const ParameterError& e) {
    key_error("model", e.what());
  }
  try {
    if (cfg.initial) spec.initial = parse_initial(*cfg.initial);
  } catch (const ParameterError& e) {
    key_error("initial", e.what());
  }

  auto& num = spec.numerics;
  if (cfg.n_max) num.n_max = *cfg.n_max;
  if (cfg.n_q) num.n_q = *cfg.n_q;
  if (cfg.n_x) num.n_x = *cfg.n_x;
  if (cfg.dt_us) num.dt = *cfg.dt_us * 1e-6;
  if (cfg.tmax_us) spec.t_max = *cfg.tmax_us * 1e-6;
  if (cfg.psf_um) num.psf_fwhm = *cfg.psf_um * 1e-6;
  if (cfg.samples_per_period) num.samples_per_period = *cfg.samples_per_period;
  return spec;
}

std::string resolved_config_json(const ScenarioSpec& spec, const RunConfig& cfg) {
  return resolved_json(spec, cfg).dump(2);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& records,
                          const ExperimentParams& p) {
  os << kTrajectoryHeader << '\n';
  const double hk = p.hbar() * p.k();
  const double hw = p.hbar() * p.omega();
  for (const auto& r : records) {
    os << format_number(r.t * 1e6) << ',' << format_number(r.N) << ','
       << format_number(r.x * 1e6) << ',' << format_number(r.q / hk) << ','
       << format_number(r.sigma_x) << ',' << format_number(r.sigma_z) << ','
       << format_number(r.parity) << ',' << format_number(r.norm) << ','
       << format_number(r.energy / hw) << '\n';
  }
}

void write_grid_csv(std::ostream& os, const SweepGrid& g) {
  if (g.values.size() != g.rows.size() * g.cols.size()) {
    throw OutputError("grid " + g.name + " does not match its axes");
  }
  for (std::size_t r = 0; r < g.rows.size(); ++r) {
    for (std::size_t c = 0; c < g.cols.size(); ++c) {
      if (c) os << ',';
      os << format_number(g.at(r, c));
    }
    os << '\n';
  }
}

std::vector<std::filesystem::path> write_results(const ScenarioResult& result,
                                                 const ScenarioSpec& spec, const RunConfig& cfg,
                                                 const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output directory " + dir.string() + ": " + ec.message());
  const json config = resolved_json(spec, cfg);
  std::vector<std::filesystem::path> written;

  for (const auto& s : result.series) {
    const auto path = dir / (result.id + "_" + s.label + ".csv");
    auto os = open_out(path);
    write_trajectory_csv(os, s.records, s.params);
    finish(os, path);
    json side;
    side["file"] = path.filename().string();
    side["kind"] = "trajectory";
    side["columns"] = trajectory_columns();
    side["config"] = config;
    side["series"] = series_json(s);
    write_json(std::filesystem::path(path).replace_extension(".json"), side);
    written.push_back(path);
  }

  for (const auto& g : result.grids) {
    const auto path = dir / (g.name + ".csv");
    auto os = open_out(path);
    write_grid_csv(os, g);
    finish(os, path);
    json side;
    side["file"] = path.filename().string();
    side["kind"] = "grid";
    side["quantity"] = g.quantity;
    side["shape"] = {g.rows.size(), g.cols.size()};
    side["rows"] = {{"name", g.row_axis}, {"values", g.rows}};
    side["cols"] = {{"name", g.col_axis}, {"values", g.cols}};
    side["config"] = config;
    write_json(std::filesystem::path(path).replace_extension(".json"), side);
    written.push_back(path);
  }

  if (!result.deviations.empty()) {
    const auto path = dir / (result.id + "_deviations.csv");
    auto os = open_out(path);
    os << kDeviationHeader << '\n';
    for (const auto& d : result.deviations) {
      os << d.label << ',' << d.observable << ',' << format_number(d.window_end * 1e6) << ','
         << format_number(report_value(d.observable, d.max_abs, spec.params)) << ','
         << format_number(report_value(d.observable, d.range, spec.params)) << ','
         << format_number(d.relative) << ',' << format_number(d.tolerance) << ','
         << (d.pass ? 1 : 0) << '\n';
    }
    finish(os, path);
    json side;
    side["file"] = path.filename().string();
    side["kind"] = "deviations";
    side["note"] = "max_abs and range in CSV trajectory units; tolerance 0 is informational";
    side["config"] = config;
    write_json(std::filesystem::path(path).replace_extension(".json"), side);
    written.push_back(path);
  }
  return written;
}

std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                  std::string* header) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw OutputError("cannot read " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (first && header) {
      *header = line;
      first = false;
      continue;
    }
    first = false;
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw OutputError("non-numeric cell '" + cell + "' in " + path.string());
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rabi
