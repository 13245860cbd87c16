#include "qndsq/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qndsq {

namespace {

void require_eta(double eta) {
  if (!(eta >= 0.0) || !(eta < 1.0))
    throw std::domain_error("eta must lie in [0, 1), got " +
                            std::to_string(eta));
}

void require_fraction(double x, const char *what) {
  if (!(x >= 0.0) || !(x <= 1.0))
    throw std::domain_error(std::string(what) + " must lie in [0, 1]");
}

} // namespace

std::string_view to_string(SystemTag tag) {
  switch (tag) {
  case SystemTag::IdealSpinHalf:
    return "ideal-spin-half";
  case SystemTag::Rb87:
    return "rb87";
  case SystemTag::Coherent:
    return "coherent";
  }
  return "unknown";
}

SystemTag system_tag_from_string(std::string_view s) {
  if (s == "rb87")
    return SystemTag::Rb87;
  if (s == "ideal" || s == "ideal-spin-half")
    return SystemTag::IdealSpinHalf;
  if (s == "coherent")
    return SystemTag::Coherent;
  throw std::invalid_argument("unknown system '" + std::string(s) + "'");
}

NoiseBudget split_eta(double eta, double r) {
  require_eta(eta);
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::invalid_argument("ratio gamma/beta must be > 0");
  NoiseBudget nb;
  nb.eta = eta;
  nb.r = r;
  nb.beta = eta / (1.0 + r);
  nb.gamma = eta - nb.beta;
  return nb;
}

double var_after_loss(double var_in, double beta, double N, double F) {
  require_fraction(beta, "beta");
  return (1.0 - beta) * (1.0 - beta) * var_in +
         beta * (1.0 - beta) * N * F / 2.0;
}

double xi2_after_loss(double xi2, double beta) {
  require_fraction(beta, "beta");
  if (!(xi2 >= 0.0))
    throw std::domain_error("xi2 must be >= 0");
  return (1.0 - beta) * xi2 + beta;
}

double var_after_decoherence(double var_in, double gamma, double N, double F,
                             double var_gamma) {
  if (!(gamma >= 0.0) || !(gamma < 1.0))
    throw std::domain_error("gamma must lie in [0, 1)");
  if (!(var_gamma >= 0.0))
    throw std::domain_error("var_gamma must be >= 0");
  return (1.0 - gamma) * (1.0 - gamma) * var_in +
         gamma * (1.0 - gamma) * N * F / 2.0 + gamma * N * var_gamma;
}

double xi2_after_decoherence(double xi2, double gamma, double F,
                             double var_gamma) {
  if (!(gamma >= 0.0) || !(gamma < 1.0))
    throw std::domain_error("gamma must lie in [0, 1)");
  if (!(F > 0.0))
    throw std::domain_error("F must be positive");
  const double g1 = 1.0 - gamma;
  return xi2 + gamma / g1 + (2.0 * var_gamma / F) * gamma / (g1 * g1);
}

double xi2_measurement(double rho0, double eta) {
  require_eta(eta);
  if (!(rho0 > 0.0))
    throw std::domain_error("rho0 must be positive");
  return 1.0 / (1.0 + rho0 * eta);
}

SqueezingOutcome xi2_ideal_spin_half(double rho0, double eta) {
  SqueezingOutcome out;
  out.system = SystemTag::IdealSpinHalf;
  out.xi2 = xi2_measurement(rho0, eta);
  out.xi2_prime = xi2_after_decoherence(out.xi2, eta, 0.5, 0.25);
  return out;
}

SqueezingOutcome xi2_rb87(double rho0, double eta, double r) {
  const NoiseBudget nb = split_eta(eta, r);
  SqueezingOutcome out;
  out.system = SystemTag::Rb87;
  out.xi2 = xi2_measurement(rho0, eta);
  const double keep = 1.0 - nb.beta;
  const double e1 = 1.0 - eta;
  out.xi2_prime = keep * out.xi2 + eta * keep / e1 + nb.gamma * keep / (e1 * e1);
  return out;
}

SqueezingOutcome xi2_coherent_reference(double eta, CoherentReading reading,
                                        double r) {
  SqueezingOutcome out;
  out.system = SystemTag::Coherent;
  out.xi2 = 1.0;
  if (reading == CoherentReading::LossOnly) {
    require_eta(eta);
    out.xi2_prime = xi2_after_loss(1.0, eta);
    return out;
  }
  const NoiseBudget nb = split_eta(eta, r);
  const double keep = 1.0 - nb.beta;
  const double e1 = 1.0 - eta;
  out.xi2_prime = keep + eta * keep / e1 + nb.gamma * keep / (e1 * e1);
  return out;
}

SqueezingOutcome xi2_for_system(SystemTag system, double rho0, double eta,
                                double r) {
  switch (system) {
  case SystemTag::Rb87:
    return xi2_rb87(rho0, eta, r);
  case SystemTag::IdealSpinHalf:
    return xi2_ideal_spin_half(rho0, eta);
  case SystemTag::Coherent:
    return xi2_coherent_reference(eta);
  }
  throw std::invalid_argument("unknown system");
}

CompositionCheck composition_check(double rho0, double eta, double r) {
  const NoiseBudget nb = split_eta(eta, r);
  const double xi2 = xi2_measurement(rho0, eta);
  const double after_loss = xi2_after_loss(xi2, nb.beta);
  return {xi2_rb87(rho0, eta, r).xi2_prime,
          xi2_after_decoherence(after_loss, nb.gamma, 0.5, 0.25)};
}

} // namespace qndsq
