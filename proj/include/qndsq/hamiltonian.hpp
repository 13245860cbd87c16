#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "qndsq/angular.hpp"

namespace qndsq {

//! Coefficients of the rank-decomposed probe Hamiltonian in units where the
//! overall coupling alpha_0 g is one:
//!   H0 = c0 n N,  H1 = c1 S_z J_z,
//!   H2 = c2 [S_x J_x - S_y J_y + 2 n N / sqrt(6)].
//! c2_raman and c2_scalar are the same sum; both are kept so that callers can
//! treat the Raman and the polarimeter-invisible parts separately.
struct DecomposedHamiltonian {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2_raman = 0.0;
  double c2_scalar = 0.0;
  double detuning = 0.0; // from F=1 -> F'=0, rad/s
  //! |detuning| < 20 x excited hyperfine spread: the spin-1/2 reduction is
  //! not trustworthy here.
  bool near_resonance_warning = false;
  //! c0 and the scalar part of H2 shift both circular modes equally and never
  //! reach the polarimeter.
  static constexpr bool scalar_terms_polarimeter_visible = false;
};

inline constexpr double kLargeDetuningFactor = 20.0;

struct DecomposeOptions {
  //! Replace every Delta_{1,F'} by the probe detuning (sum-rule diagnostic).
  bool equal_detunings = false;
};

//! Probe detuning Delta_{F,F'} = probe_detuning - (offset(F') - offset(F'=0)).
//! Falls back to the lowest excited level when F'=0 is absent.
double transition_detuning(const HyperfineLine &line, int Fprime,
                           double probe_detuning);

//! Throws std::domain_error if the probe lies within 1e-6 Gamma of any
//! transition.
DecomposedHamiltonian decompose(const HyperfineLine &line,
                                double probe_detuning,
                                DecomposeOptions opts = {});

//! alpha^(1)_{1,0} / Delta_{1,0}: the QND coupling of the effective
//! Lambda system (S_z J_z) that survives at large detuning.
double effective_coupling(const HyperfineLine &line, double probe_detuning);

//! |c2_raman / c1|. Throws std::domain_error when c1 vanishes.
double raman_suppression_ratio(const HyperfineLine &line,
                               double probe_detuning,
                               DecomposeOptions opts = {});

struct ScanRow {
  double detuning_over_hfs;
  std::optional<DecomposedHamiltonian> h; // empty when resonant
  std::optional<double> ratio;            // empty when resonant or c1 = 0
};

std::vector<ScanRow> detuning_scan(const HyperfineLine &line,
                                   const std::vector<double> &detunings_over_hfs,
                                   DecomposeOptions opts = {});

//! CSV with header detuning_over_hfs,c0,c1,c2_raman,ratio; resonant rows
//! carry nan.
void write_scan_csv(std::ostream &os, const std::vector<ScanRow> &rows);

//! Least-squares slope of log|y| against log x.
double fit_power_law_exponent(const std::vector<double> &x,
                              const std::vector<double> &y);

} // namespace qndsq
