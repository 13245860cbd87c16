// Command-line front end: squeezing curves, eta optimization, detuning scans
// and Monte Carlo validation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "qndsq/scenario.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidationFailure = 2,
  kNumericalFailure = 3,
};

struct Flags {
  std::string config;
  std::string system;
  double rho0 = 0;
  double eta_min = 0, eta_max = 0;
  int steps = 0;
  double ratio = 0;
  std::string out;
  std::uint64_t seed = 0;
  std::string format = "csv";
  double detuning_min = 0, detuning_max = 0;
  bool equal_detunings = false;
  std::int64_t atoms = 0, trials = 0;
  bool zero_scattering = false;
  double tolerance = 0;
};

} // namespace

int main(int argc, char **argv) {
  using namespace qndsq;

  CLI::App app{"QND spin-squeezing budget for a cold 87Rb F=1 ensemble"};
  app.require_subcommand(1);

  Flags fl;
  auto *o_config = app.add_option("--config", fl.config, "Scenario JSON file");
  auto *o_system = app.add_option("--system", fl.system, "rb87|ideal|coherent")
                       ->check(CLI::IsMember({"rb87", "ideal", "ideal-spin-half",
                                              "coherent"}));
  auto *o_rho0 = app.add_option("--rho0", fl.rho0, "Resonant optical density");
  auto *o_eta_min = app.add_option("--eta-min", fl.eta_min);
  auto *o_eta_max = app.add_option("--eta-max", fl.eta_max);
  auto *o_steps = app.add_option("--steps", fl.steps, "Grid points");
  auto *o_ratio = app.add_option("--ratio", fl.ratio, "gamma/beta split");
  app.add_option("--out", fl.out, "Output file (default: stdout)");
  auto *o_seed = app.add_option("--seed", fl.seed, "Monte Carlo seed");
  app.add_option("--format", fl.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  auto *o_tol = app.add_option("--tolerance", fl.tolerance,
                               "Golden-section tolerance on eta");

  auto *curve = app.add_subcommand("curve", "xi'^2 over the eta grid");
  auto *optimize = app.add_subcommand("optimize", "eta minimizing xi'^2");
  auto *scan = app.add_subcommand("scan", "Hamiltonian coefficients vs detuning");
  auto *validate = app.add_subcommand("validate", "Monte Carlo battery");
  for (auto *sub : {curve, optimize, scan, validate})
    sub->fallthrough();

  auto *o_dmin = scan->add_option("--detuning-min", fl.detuning_min,
                                  "In units of the excited hyperfine spread");
  auto *o_dmax = scan->add_option("--detuning-max", fl.detuning_max);
  scan->add_flag("--equal-detuning", fl.equal_detunings,
                 "Set every Delta_{1,F'} to the probe detuning");
  auto *o_atoms = validate->add_option("--atoms", fl.atoms);
  auto *o_trials = validate->add_option("--trials", fl.trials);
  validate->add_flag("--zero-scattering", fl.zero_scattering,
                     "Run the battery with eta = 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  ScenarioConfig cfg;
  try {
    if (*o_config)
      cfg = load_config(fl.config);
    if (*o_system)
      cfg.system = system_tag_from_string(fl.system);
    if (*o_rho0)
      cfg.rho0 = fl.rho0;
    if (*o_eta_min)
      cfg.eta_grid.min = fl.eta_min;
    if (*o_eta_max)
      cfg.eta_grid.max = fl.eta_max;
    if (*o_steps) {
      cfg.eta_grid.steps = fl.steps;
      cfg.scan.steps = fl.steps;
    }
    if (*o_ratio)
      cfg.r_ratio = fl.ratio;
    if (*o_tol)
      cfg.optimizer.tolerance = fl.tolerance;
    if (*o_dmin)
      cfg.scan.min = fl.detuning_min;
    if (*o_dmax)
      cfg.scan.max = fl.detuning_max;
    if (fl.equal_detunings)
      cfg.scan.equal_detunings = true;
    if (validate->parsed()) {
      if (!cfg.mc)
        cfg.mc = McSettings{};
      if (*o_seed)
        cfg.mc->seed = fl.seed;
      if (*o_atoms)
        cfg.mc->n_atoms = fl.atoms;
      if (*o_trials)
        cfg.mc->n_trials = fl.trials;
      if (fl.zero_scattering)
        cfg.mc->zero_scattering = true;
    }
    cfg.validate();
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::unique_ptr<std::ofstream> file;
  std::ostream *os = &std::cout;
  if (!fl.out.empty()) {
    file = std::make_unique<std::ofstream>(fl.out);
    if (!*file) {
      std::cerr << "error: cannot write " << fl.out << '\n';
      return kUsage;
    }
    os = file.get();
  }
  const bool json = fl.format == "json";

  try {
    if (curve->parsed()) {
      const auto pts = run_curve(cfg);
      if (json)
        write_curve_json(*os, pts, cfg.system, cfg.rho0);
      else
        write_curve_csv(*os, pts, cfg.system, cfg.rho0);
    } else if (optimize->parsed()) {
      write_optimize(*os, run_optimize(cfg), cfg, json);
    } else if (scan->parsed()) {
      const auto rows = run_detuning_scan(cfg);
      int flagged = 0;
      for (const auto &r : rows)
        flagged += r.h ? 0 : 1;
      if (flagged)
        std::cerr << "note: " << flagged
                  << " resonant grid point(s) reported as nan\n";
      write_scan_csv(*os, rows);
    } else if (validate->parsed()) {
      const auto report = run_validate(cfg);
      *os << battery_report_json(report) << '\n';
      if (report.max_abs_z > kValidateFailZ) {
        std::cerr << "validation failed: max |z| = " << report.max_abs_z
                  << '\n';
        return kValidationFailure;
      }
    }
  } catch (const NonUnimodalError &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kOk;
}
