#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qndsq/noise.hpp"

namespace qndsq {

struct McConfig {
  std::int64_t n_atoms = 10000;
  std::int64_t n_trials = 10000;
  std::uint64_t seed = 0x5eed5eedULL;
  NoiseBudget noise;
  //! Worker threads; 0 picks the hardware concurrency. Results do not depend
  //! on this value.
  unsigned threads = 0;

  void validate() const;
};

struct McResult {
  double empirical_variance = 0.0; // or the xi'^2 estimate for end-to-end runs
  double standard_error = 0.0;
  double analytic_value = 0.0;
  double z_score = 0.0;
};

inline constexpr const char *kRngAlgorithm = "mt19937_64";

//! Lowest collective J_z variance the exchangeable +-1/2 construction can
//! reach: 0 for even N, 1/4 for odd N.
double attainable_variance_floor(std::int64_t n_atoms);

//! Loss of each atom with probability noise.beta, applied to a collective
//! input of variance input_var_scale * N/4. Compared with var_after_loss.
McResult mc_loss_variance(const McConfig &cfg, double input_var_scale);

//! Each atom decoheres with probability noise.gamma and its J_z value is
//! replaced by +-sqrt(var_gamma). Compared with var_after_decoherence.
McResult mc_decoherence_variance(const McConfig &cfg, double input_var_scale,
                                 double var_gamma);

//! Input squeezed by the Gaussian measurement at kappa^2 = rho0 eta, then per
//! atom: lost (beta), decohered (gamma) or untouched. The Wineland ratio uses
//! N' = (1-beta) N and <J_x> = (1-eta) N/2. Compared with xi2_rb87.
McResult mc_end_to_end(const McConfig &cfg, double rho0);

enum class McKind { Loss, Decoherence, EndToEnd };
std::string_view to_string(McKind kind);

struct McCase {
  std::string name;
  McKind kind = McKind::Loss;
  McConfig cfg;
  double input_var_scale = 1.0;
  double var_gamma = 0.25;
  double rho0 = 0.0;
};

struct McCaseResult {
  McCase spec;
  McResult result;
};

McResult run_case(const McCase &c);

//! 20 cases: loss, decoherence and end-to-end configurations.
std::vector<McCase> default_battery(std::int64_t n_atoms, std::int64_t n_trials,
                                    std::uint64_t seed);
//! Every case of the default battery with the scattering switched off.
std::vector<McCase> zero_scattering_battery(std::int64_t n_atoms,
                                            std::int64_t n_trials,
                                            std::uint64_t seed);

struct BatteryReport {
  std::vector<McCaseResult> cases;
  int beyond_3sigma = 0;
  double max_abs_z = 0.0;
};

BatteryReport run_battery(const std::vector<McCase> &cases);

//! {config, empirical, analytic, z_score, rng: {algorithm, seed}} per case.
std::string battery_report_json(const BatteryReport &report);

} // namespace qndsq
