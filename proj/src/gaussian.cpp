#include "qndsq/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace qndsq {

GaussianState GaussianState::coherent(double N, double n) {
  if (!(N > 0.0) || !(n > 0.0))
    throw std::invalid_argument("coherent state needs N > 0 and n > 0");
  GaussianState s;
  s.mean_Jx = 0.5 * N;
  s.mean_Sx = 0.5 * n;
  s.cov.diagonal() << 0.25 * N, 0.25 * N, 0.25 * n, 0.25 * n;
  return s;
}

void GaussianState::validate() const {
  if (!cov.allFinite() || !mean.allFinite())
    throw std::invalid_argument("state has non-finite moments");
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1.0e-12 * scale)
    throw std::invalid_argument("covariance is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(cov);
  const double floor = -1.0e-12 * std::max(cov.trace(), 1.0);
  if (es.eigenvalues().minCoeff() < floor)
    throw std::invalid_argument("covariance is not positive semidefinite");
}

double kappa2_from_physics(const ProbePulse &pulse) {
  if (!(pulse.n_photons > 0.0) || !(pulse.rho0 > 0.0) || !(pulse.eta >= 0.0) ||
      !(pulse.eta < 1.0))
    throw std::invalid_argument("probe pulse out of range");
  return pulse.rho0 * pulse.eta;
}

Eigen::Matrix4d qnd_transfer_matrix(const GaussianState &state, double kappa2) {
  if (!(kappa2 >= 0.0) || !std::isfinite(kappa2))
    throw std::invalid_argument("kappa2 must be finite and >= 0");
  Eigen::Matrix4d M = Eigen::Matrix4d::Identity();
  if (kappa2 == 0.0)
    return M;
  const double product = state.mean_Jx * state.mean_Sx;
  if (!(product > 0.0))
    throw std::invalid_argument("QND gains need <J_x><S_x> > 0");
  const double omega_tau = std::sqrt(kappa2 / product);
  M(kJy, kSz) = omega_tau * state.mean_Jx;
  M(kSy, kJz) = omega_tau * state.mean_Sx;
  return M;
}

GaussianState propagate(const GaussianState &state, double kappa2) {
  state.validate();
  const Eigen::Matrix4d M = qnd_transfer_matrix(state, kappa2);
  GaussianState out = state;
  out.mean = M * state.mean;
  out.cov = M * state.cov * M.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

GaussianState condition_on_Sy(const GaussianState &state, double outcome) {
  state.validate();
  const double var_sy = state.cov(kSy, kSy);
  if (!(var_sy > 0.0))
    throw std::invalid_argument("cannot condition on a degenerate S_y");

  const Eigen::Vector4d k = state.cov.col(kSy) / var_sy;
  GaussianState out = state;
  out.mean = state.mean + k * (outcome - state.mean(kSy));
  out.cov = state.cov - k * state.cov.row(kSy);
  out.cov.row(kSy).setZero();
  out.cov.col(kSy).setZero();
  out.mean(kSy) = outcome;
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

double wineland_xi2(const GaussianState &state, double N, double F_eff) {
  if (state.mean_Jx == 0.0)
    throw std::domain_error("Wineland parameter undefined for zero mean spin");
  if (!(N > 0.0) || !(F_eff > 0.0))
    throw std::invalid_argument("N and F_eff must be positive");
  return state.cov(kJz, kJz) * 2.0 * N * F_eff /
         (state.mean_Jx * state.mean_Jx);
}

} // namespace qndsq
