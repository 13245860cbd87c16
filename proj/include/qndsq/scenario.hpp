#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qndsq/hamiltonian.hpp"
#include "qndsq/noise.hpp"
#include "qndsq/oracle.hpp"

namespace qndsq {

struct EtaGrid {
  double min = 0.0;
  double max = 0.5;
  int steps = 501;

  std::vector<double> points() const;
};

struct OptimizerSettings {
  double tolerance = 1.0e-8; // near the sqrt(eps) floor for these curves
  int max_iters = 200;
  int coarse_points = 1000;
};

struct ScanSettings {
  double min = -1000.0; // probe detuning / excited hyperfine spread
  double max = 1000.0;
  int steps = 2001;
  bool equal_detunings = false;
};

struct McSettings {
  std::int64_t n_atoms = 10000;
  std::int64_t n_trials = 10000;
  std::uint64_t seed = 20060501;
  unsigned threads = 0;
  bool zero_scattering = false;
};

struct ScenarioConfig {
  SystemTag system = SystemTag::Rb87;
  double rho0 = 25.0;
  EtaGrid eta_grid;
  double r_ratio = kRb87DecoherenceToLossRatio;
  OptimizerSettings optimizer;
  std::optional<McSettings> mc;
  std::optional<std::string> line_data;
  ScanSettings scan;

  //! Throws std::invalid_argument on out-of-range settings.
  void validate() const;
};

//! Parses a JSON scenario; relative line_data paths resolve against
//! base_dir. Keys absent from the document keep their defaults.
ScenarioConfig config_from_json_text(const std::string &text,
                                     const std::string &base_dir = ".");
ScenarioConfig load_config(const std::string &path);

struct CurvePoint {
  double eta, beta, gamma, xi2, xi2_prime;
};

CurvePoint evaluate_point(SystemTag system, double rho0, double eta, double r);

std::vector<CurvePoint> run_curve(const ScenarioConfig &config);

//! Columns eta,beta,gamma,xi2,xi2_prime,system,rho0 at 9 significant digits.
void write_curve_csv(std::ostream &os, const std::vector<CurvePoint> &points,
                     SystemTag system, double rho0);
void write_curve_json(std::ostream &os, const std::vector<CurvePoint> &points,
                      SystemTag system, double rho0);

struct OptimizeResult {
  double eta_star;
  double xi2_prime_min;
  double squeezing_percent; // 100 (1 - xi'^2)
  int iterations;
};

//! Raised when the coarse pre-scan finds more than one interior minimum.
class NonUnimodalError : public std::runtime_error {
public:
  NonUnimodalError(std::vector<double> candidates);
  const std::vector<double> &candidates() const { return candidates_; }

private:
  std::vector<double> candidates_;
};

//! Minimizes f on (0, x_max]: a coarse grid pre-scan picks the bracket, then
//! golden-section search. Throws NonUnimodalError if the grid shows more than
//! one interior minimum.
OptimizeResult minimize_unimodal(const std::function<double(double)> &f,
                                 double x_max, const OptimizerSettings &opt);

//! Coarse grid pre-scan of xi'^2 on (0, eta_max], then golden-section search
//! on the bracket around the grid minimum.
OptimizeResult run_optimize(const ScenarioConfig &config);

void write_optimize(std::ostream &os, const OptimizeResult &r,
                    const ScenarioConfig &config, bool json);

HyperfineLine resolve_line(const ScenarioConfig &config);

std::vector<ScanRow> run_detuning_scan(const ScenarioConfig &config);

BatteryReport run_validate(const ScenarioConfig &config);

//! |z| above this fails the validate subcommand.
inline constexpr double kValidateFailZ = 4.0;

} // namespace qndsq
