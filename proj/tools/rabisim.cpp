// rabisim: run trajectories, sweeps and figure scenarios, write CSV + JSON.

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rabi/io.hpp"
#include "rabi/scenarios.hpp"

namespace {

struct CommonFlags {
  std::optional<std::string> config;
  std::map<std::string, std::string> values;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("-c,--config", f.config, "JSON configuration file");
  cmd->add_option("--threads", f.threads, "worker threads for sweeps (0 = all cores)");
  const std::pair<const char*, const char*> keys[] = {
      {"omega_hz", "trap frequency omega/2pi in Hz"},
      {"omega_q_hz", "qubit frequency omega_q/2pi in Hz, a number or a JSON array"},
      {"g_over_omega", "coupling ratio, a number or a JSON array"},
      {"lambda_nm", "Raman wavelength in nm"},
      {"atom", "atomic species (Rb87)"},
      {"n_max", "Fock cutoff"},
      {"n_q", "quasimomentum grid size"},
      {"n_x", "lattice position grid size"},
      {"dt_us", "split-step time step in us"},
      {"tmax_us", "end time in us"},
      {"model", "qrm, periodic or lattice"},
      {"initial", "qubit_ground, qubit_excited, band_minus2hk or band_plus2hk"},
      {"psf_um", "imaging PSF FWHM in um (0 disables)"},
      {"samples_per_period", "output samples per trap period"},
      {"output", "output directory"},
  };
  for (const auto& [key, help] : keys) {
    std::string flag = std::string("--") + key;
    for (char& ch : flag) {
      if (ch == '_') ch = '-';
    }
    const std::string k = key;
    cmd->add_option_function<std::string>(
        flag, [&f, k](const std::string& v) { f.values[k] = v; }, help);
  }
}

rabi::RunConfig load(const CommonFlags& f, const std::optional<std::string>& scenario) {
  rabi::ConfigOverrides ov(f.values.begin(), f.values.end());
  if (scenario) ov.emplace_back("scenario", *scenario);
  std::optional<std::filesystem::path> file;
  if (f.config) file = *f.config;
  return rabi::load_config(file, ov);
}

void report(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::cout << p.string() << '\n';
}

int print_deviations(const rabi::ScenarioResult& r) {
  int failures = 0;
  std::printf("%-36s %-8s %10s %12s %10s  %s\n", "comparison", "obs", "t_end_us", "relative",
              "tolerance", "status");
  for (const auto& d : r.deviations) {
    const char* status = d.tolerance <= 0.0 ? "info" : (d.pass ? "ok" : "FAIL");
    if (d.tolerance > 0.0 && !d.pass) ++failures;
    std::printf("%-36s %-8s %10.2f %12.4e %10.2e  %s\n", d.label.c_str(), d.observable.c_str(),
                d.window_end * 1e6, d.relative, d.tolerance, status);
  }
  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Rabi model simulator: QRM, periodic two-band and full lattice engines"};
  app.require_subcommand(1);

  CommonFlags evolve_f, sweep_f, figure_f, compare_f;
  auto* evolve = app.add_subcommand("evolve", "single trajectory");
  add_common(evolve, evolve_f);

  auto* sweep = app.add_subcommand("sweep", "one trajectory per axis value");
  add_common(sweep, sweep_f);
  std::string axis = "omega_q";
  sweep->add_option("--axis", axis, "omega_q or g_over_omega")
      ->check(CLI::IsMember({"omega_q", "g_over_omega"}));

  auto* figure = app.add_subcommand("figure", "run a named measurement scenario");
  add_common(figure, figure_f);
  std::string figure_id;
  figure->add_option("id", figure_id, "scenario id")
      ->required()
      ->check(CLI::IsMember(rabi::kScenarioIds));

  auto* compare = app.add_subcommand("compare", "cross-model deviation report");
  add_common(compare, compare_f);

  CLI11_PARSE(app, argc, argv);

  try {
    if (evolve->parsed()) {
      const auto cfg = load(evolve_f, "evolve");
      auto spec = rabi::resolve(cfg);
      spec.numerics.threads = evolve_f.threads;
      const auto r = rabi::run_evolve(spec);
      report(rabi::write_results(r, spec, cfg, cfg.output));
    } else if (sweep->parsed()) {
      const auto cfg = load(sweep_f, "sweep");
      auto spec = rabi::resolve(cfg);
      spec.numerics.threads = sweep_f.threads;
      const auto r = rabi::run_sweep(
          spec, axis == "omega_q" ? rabi::SweepAxis::omega_q : rabi::SweepAxis::g_over_omega);
      report(rabi::write_results(r, spec, cfg, cfg.output));
    } else if (figure->parsed()) {
      const auto cfg = load(figure_f, figure_id);
      auto spec = rabi::resolve(cfg);
      spec.numerics.threads = figure_f.threads;
      const auto r = rabi::run_scenario(spec);
      report(rabi::write_results(r, spec, cfg, cfg.output));
      if (!r.deviations.empty()) print_deviations(r);
    } else if (compare->parsed()) {
      const auto cfg = load(compare_f, "oracle_compare");
      auto spec = rabi::resolve(cfg);
      spec.numerics.threads = compare_f.threads;
      const auto r = rabi::oracle_compare(spec);
      report(rabi::write_results(r, spec, cfg, cfg.output));
      return print_deviations(r) == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "rabisim: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
