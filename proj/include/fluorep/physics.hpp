#pragma once

#include "fluorep/model.hpp"

namespace fluorep {

// Interrupted-retrieval window for suppressing non-symmetric excitations.
// The retrieval of the symmetric spin wave stalls while light crosses the
// ensemble (duration t_max = l / v_g), whereas a single emitter decays at
// omega_c^2 / gamma, so a usable interruption t must satisfy
// t_min = gamma / omega_c^2 < t < t_max, and t_max / t_min = depth_d exactly.
struct PirResult {
  double t_min = 0.0;       // s
  double t_max = 0.0;       // s
  double t_chosen = 0.0;    // s, hits the loss target -2 ln(eta) / d, clamped
  double delta_loss = 0.0;  // symmetric-mode loss 2 v_g t_chosen / l
  double suppression = 0.0; // eta + (1 - eta) exp(-delta_loss * d / 2)
  bool feasible = false;    // depth_d >= margin
};

// Fluorescence scattering rate of one occupied storage level driven at
// omega_p: gamma * omega_p^2 / (gamma^2 + 2 omega_p^2). Saturates at gamma/2.
double fluorescence_rate(double gamma, double omega_p);

// Off-resonant leak rate of a reservoir atom into the probed level:
// beta * gamma * omega_p^2 / (4 delta^2).
double leak_rate(double gamma, double omega_p, double beta, double delta);

// Expected number of false occupation events accumulated while collecting
// n_photons fluorescence photons from all n_atoms reservoir atoms:
// n_atoms * leak_rate * n_photons / (eta * eta_d * fluorescence_rate).
// Note eta/eta_d here balance the photon collection budget of the
// discrimination measurement, so the 2pi convention cancels.
double dark_count_expectation(const PhysicalParams& physical, const LinkParams& link);

// Group velocity of the retrieved light inside the ensemble:
// omega_c^2 * length_l / (gamma * depth_d).
double group_velocity(double omega_c, double length_l, double gamma, double depth_d);

// Window bounds and a chosen interruption duration. Feasible iff
// depth_d >= margin. t_chosen targets delta_loss = pir_cost_for_target and is
// clamped into [t_min, t_max].
PirResult pir_window(const PhysicalParams& physical, double margin);

// Symmetric-mode loss of an interruption of duration t_chosen:
// 2 v_g t_chosen / length_l, clamped to [0, 1]. *clamped reports clamping.
double pir_loss(double t_chosen, double v_g, double length_l, bool* clamped = nullptr);

// Surviving non-symmetric excitation fraction after an interruption with
// loss delta_loss: eta + (1 - eta) exp(-delta_loss * depth_d / 2). The first
// term is the forward fraction, which the interruption cannot touch.
double pir_suppression(double eta, double delta_loss, double depth_d);

// Loss budget delta that suppresses the non-forward excitations down to the
// forward floor: exp(-delta d / 2) = eta, i.e. delta = -2 ln(eta) / depth_d.
// At this operating point pir_suppression equals eta * (2 - eta).
double pir_cost_for_target(double eta, double depth_d);

// Probability that a generated spin-wave photon is detected:
// eta * eta_d * exp(-l0 / (2 latt)); the photon travels half the segment to
// the midpoint detection station.
double link_efficiency(double eta, double eta_d, double l0_km, double latt_km);

// Probability that a second spin wave written into an already occupied
// ensemble produces a separable state: (1 - beta) / (beta * eta_prime *
// n_atoms), clamped to [0, 1]. Domain error for beta = 0.
double mismatch_separable_prob(double beta, double eta_prime, long long n_atoms,
                               bool* clamped = nullptr);

// Expected attempts before the occupied ensemble accepts the second spin
// wave: 1 / (beta * eta_prime * q).
double mismatch_expected_attempts(double beta, double eta_prime, double q);

// Ideal success probability of the rotation + fluorescence connection for
// ensembles of n_atoms atoms: 2N / (4N - 1). Approaches 1/2 from above.
double swap_success_ideal(long long n_atoms);

// Per-attempt success probability of entangling one elementary segment:
// 2 q * link_efficiency. The factor 2 counts the two ensembles whose photon
// can produce the heralding click.
double generation_success_prob(double q, double eta, double eta_d, double l0_km,
                               double latt_km);

}  // namespace fluorep
