#pragma once

#include <Eigen/Dense>

namespace qndsq {

//! Indices into the fluctuation vector (J_y, J_z, S_y, S_z).
enum Quadrature : int { kJy = 0, kJz = 1, kSy = 2, kSz = 3 };

//! Second-moment description of the collective atomic pseudo-spin and the
//! probe Stokes vector. J_x and S_x are large classical means; the four
//! transverse components fluctuate.
struct GaussianState {
  double mean_Jx = 0.0;
  double mean_Sx = 0.0;
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();

  //! N atoms and n photons, both x-polarized coherent states.
  static GaussianState coherent(double N, double n);

  //! Throws std::invalid_argument unless cov is symmetric PSD (eigenvalues
  //! >= -1e-12 trace).
  void validate() const;
};

struct ProbePulse {
  double n_photons;
  double eta;  // photons scattered per atom over the pulse
  double rho0; // resonant optical density
};

//! kappa^2 = rho0 eta, the measurement strength that fixes xi^2 = 1/(1+kappa^2).
double kappa2_from_physics(const ProbePulse &pulse);

//! Linearized QND map for a pulse of strength kappa2:
//!   J_y -> J_y + g_a S_z,  S_y -> S_y + g_l J_z,  J_z, S_z unchanged,
//! with g_a = Omega tau <J_x>, g_l = Omega tau <S_x> and
//! (Omega tau)^2 <J_x><S_x> = kappa2. For coherent inputs this makes
//! var(S_y^out) = var(S_y^in) (1 + kappa2).
GaussianState propagate(const GaussianState &state, double kappa2);

//! The 4x4 map applied by propagate().
Eigen::Matrix4d qnd_transfer_matrix(const GaussianState &state, double kappa2);

//! Conditions the atomic variables on a polarimeter reading of S_y. The
//! measured S_y is then known exactly, so its row and column are cleared.
GaussianState condition_on_Sy(const GaussianState &state, double outcome = 0.0);

//! Wineland squeezing parameter var(J_z) 2 N F_eff / <J_x>^2.
double wineland_xi2(const GaussianState &state, double N, double F_eff = 0.5);

} // namespace qndsq
