#pragma once

#include <string_view>

#include "qndsq/angular.hpp"

namespace qndsq {

//! Split of the scattered photons per atom, eta = beta + gamma.
struct NoiseBudget {
  double eta = 0.0;
  double beta = 0.0;  // scattering that removes atoms from the pseudo-spin
  double gamma = 0.0; // scattering that leaves them in it, decohered
  double r = kRb87DecoherenceToLossRatio;
};

enum class SystemTag { IdealSpinHalf, Rb87, Coherent };

std::string_view to_string(SystemTag tag);
//! Accepts "rb87", "ideal", "ideal-spin-half", "coherent".
SystemTag system_tag_from_string(std::string_view s);

struct SqueezingOutcome {
  double xi2 = 1.0;       // after the measurement, before scattering damage
  double xi2_prime = 1.0; // after loss and decoherence
  SystemTag system = SystemTag::Rb87;
};

//! beta = eta/(1+r), gamma = eta - beta. Throws for eta outside [0, 1) or
//! r <= 0.
NoiseBudget split_eta(double eta, double r = kRb87DecoherenceToLossRatio);

//! Collective variance of the N' = (1-beta) N atoms left after loss.
double var_after_loss(double var_in, double beta, double N, double F);
double xi2_after_loss(double xi2, double beta);

//! Collective variance after a fraction gamma of the atoms decohere, each
//! adding var_gamma.
double var_after_decoherence(double var_in, double gamma, double N, double F,
                             double var_gamma);
double xi2_after_decoherence(double xi2, double gamma, double F = 0.5,
                             double var_gamma = 0.25);

//! Measurement-limited squeezing 1/(1 + rho0 eta).
double xi2_measurement(double rho0, double eta);

//! Four-level spin-1/2 atom: every scattering event decoheres (gamma = eta).
SqueezingOutcome xi2_ideal_spin_half(double rho0, double eta);

//! F=1 pseudo-spin on the 87Rb D2 line:
//!   xi'^2 = (1-b)/(1+rho0 eta) + eta (1-b)/(1-eta) + g (1-b)/(1-eta)^2
//! with (b, g) = split_eta(eta, r).
SqueezingOutcome xi2_rb87(double rho0, double eta,
                          double r = kRb87DecoherenceToLossRatio);

enum class CoherentReading {
  LossOnly,             // loss leaves a coherent state coherent: xi'^2 = 1
  WithRbDecoherence,    // same composition as xi2_rb87 with xi^2 = 1
};

SqueezingOutcome xi2_coherent_reference(
    double eta, CoherentReading reading = CoherentReading::LossOnly,
    double r = kRb87DecoherenceToLossRatio);

//! Dispatch on the system tag; coherent uses the loss-only reading.
SqueezingOutcome xi2_for_system(SystemTag system, double rho0, double eta,
                                double r = kRb87DecoherenceToLossRatio);

//! Closed-form rb87 result next to loss-then-decoherence applied in sequence
//! (xi2_after_loss followed by xi2_after_decoherence). The two are different
//! composition laws; the gap is reported, not reconciled.
struct CompositionCheck {
  double closed_form;
  double sequential;
  double difference() const { return closed_form - sequential; }
};
CompositionCheck composition_check(double rho0, double eta,
                                   double r = kRb87DecoherenceToLossRatio);

} // namespace qndsq
