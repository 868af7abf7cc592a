#include "fluorep/physics.hpp"

#include <cmath>
#include <stdexcept>

namespace fluorep {

double fluorescence_rate(double gamma, double omega_p) {
  if (!(gamma > 0)) throw std::domain_error("fluorescence_rate: gamma must be positive");
  if (omega_p < 0) throw std::domain_error("fluorescence_rate: omega_p must be non-negative");
  const double w2 = omega_p * omega_p;
  return gamma * w2 / (gamma * gamma + 2.0 * w2);
}

double leak_rate(double gamma, double omega_p, double beta, double delta) {
  if (!(delta > 0)) throw std::domain_error("leak_rate: delta must be positive");
  return beta * gamma * omega_p * omega_p / (4.0 * delta * delta);
}

double dark_count_expectation(const PhysicalParams& physical, const LinkParams& link) {
  const double r = fluorescence_rate(physical.gamma, physical.omega_p);
  const double rp = leak_rate(physical.gamma, physical.omega_p, physical.beta, physical.delta);
  const double collected = physical.eta * link.eta_d * r;
  if (!(collected > 0))
    throw std::domain_error("dark_count_expectation: eta*eta_d*fluorescence_rate is zero");
  return static_cast<double>(link.n_photons) * rp * static_cast<double>(physical.n_atoms) /
         collected;
}

double group_velocity(double omega_c, double length_l, double gamma, double depth_d) {
  if (!(omega_c > 0)) throw std::domain_error("group_velocity: omega_c must be positive");
  if (!(length_l > 0)) throw std::domain_error("group_velocity: length_l must be positive");
  if (!(gamma > 0)) throw std::domain_error("group_velocity: gamma must be positive");
  if (!(depth_d > 0)) throw std::domain_error("group_velocity: depth_d must be positive");
  return omega_c * omega_c * length_l / (gamma * depth_d);
}

PirResult pir_window(const PhysicalParams& physical, double margin) {
  if (!(margin > 1)) throw std::domain_error("pir_window: margin must exceed 1");
  const double v_g = group_velocity(physical.omega_c, physical.length_l, physical.gamma,
                                    physical.depth_d);
  PirResult res;
  res.t_min = physical.gamma / (physical.omega_c * physical.omega_c);
  res.t_max = physical.length_l / v_g;
  res.feasible = physical.depth_d >= margin;

  // Aim the interruption at the loss budget that floors the non-symmetric
  // residue, then keep it strictly inside the window.
  const double delta_target = pir_cost_for_target(physical.eta, physical.depth_d);
  double t = delta_target * res.t_max / 2.0;
  const double lo = res.t_min * (1.0 + 1e-9);
  const double hi = res.t_max * (1.0 - 1e-9);
  if (lo < hi) {
    if (t < lo) t = lo;
    if (t > hi) t = hi;
  } else {
    t = res.t_max; // degenerate window (depth_d <= 1); feasible is false here
  }
  res.t_chosen = t;
  res.delta_loss = pir_loss(res.t_chosen, v_g, physical.length_l);
  res.suppression = pir_suppression(physical.eta, res.delta_loss, physical.depth_d);
  return res;
}

double pir_loss(double t_chosen, double v_g, double length_l, bool* clamped) {
  if (t_chosen < 0) throw std::domain_error("pir_loss: t_chosen must be non-negative");
  if (!(v_g > 0)) throw std::domain_error("pir_loss: v_g must be positive");
  if (!(length_l > 0)) throw std::domain_error("pir_loss: length_l must be positive");
  double delta = 2.0 * v_g * t_chosen / length_l;
  bool did_clamp = false;
  if (delta > 1.0) {
    delta = 1.0;
    did_clamp = true;
  }
  if (clamped) *clamped = did_clamp;
  return delta;
}

double pir_suppression(double eta, double delta_loss, double depth_d) {
  if (!(eta > 0 && eta < 1)) throw std::domain_error("pir_suppression: eta must be in (0,1)");
  if (delta_loss < 0) throw std::domain_error("pir_suppression: delta_loss must be non-negative");
  if (!(depth_d > 0)) throw std::domain_error("pir_suppression: depth_d must be positive");
  return eta + (1.0 - eta) * std::exp(-delta_loss * depth_d / 2.0);
}

double pir_cost_for_target(double eta, double depth_d) {
  if (!(eta > 0 && eta < 1))
    throw std::domain_error("pir_cost_for_target: eta must be in (0,1)");
  if (!(depth_d > 0)) throw std::domain_error("pir_cost_for_target: depth_d must be positive");
  return -2.0 * std::log(eta) / depth_d;
}

double link_efficiency(double eta, double eta_d, double l0_km, double latt_km) {
  if (!(eta > 0)) throw std::domain_error("link_efficiency: eta must be positive");
  if (!(eta_d > 0)) throw std::domain_error("link_efficiency: eta_d must be positive");
  if (l0_km < 0) throw std::domain_error("link_efficiency: l0_km must be non-negative");
  if (!(latt_km > 0)) throw std::domain_error("link_efficiency: latt_km must be positive");
  return eta * eta_d * std::exp(-l0_km / (2.0 * latt_km));
}

double mismatch_separable_prob(double beta, double eta_prime, long long n_atoms,
                               bool* clamped) {
  if (!(beta > 0)) throw std::domain_error("mismatch_separable_prob: beta must be positive");
  if (!(eta_prime > 0))
    throw std::domain_error("mismatch_separable_prob: eta_prime must be positive");
  if (n_atoms < 1)
    throw std::domain_error("mismatch_separable_prob: n_atoms must be at least 1");
  double p = (1.0 - beta) / (beta * eta_prime * static_cast<double>(n_atoms));
  bool did_clamp = false;
  if (p > 1.0) {
    p = 1.0;
    did_clamp = true;
  }
  if (p < 0.0) { // beta > 1 input; formula only makes sense up to beta = 1
    p = 0.0;
    did_clamp = true;
  }
  if (clamped) *clamped = did_clamp;
  return p;
}

double mismatch_expected_attempts(double beta, double eta_prime, double q) {
  if (!(beta > 0)) throw std::domain_error("mismatch_expected_attempts: beta must be positive");
  if (!(eta_prime > 0))
    throw std::domain_error("mismatch_expected_attempts: eta_prime must be positive");
  if (!(q > 0)) throw std::domain_error("mismatch_expected_attempts: q must be positive");
  return 1.0 / (beta * eta_prime * q);
}

double swap_success_ideal(long long n_atoms) {
  if (n_atoms < 1) throw std::domain_error("swap_success_ideal: n_atoms must be at least 1");
  const double n = static_cast<double>(n_atoms);
  return 2.0 * n / (4.0 * n - 1.0);
}

double generation_success_prob(double q, double eta, double eta_d, double l0_km,
                               double latt_km) {
  if (q < 0) throw std::domain_error("generation_success_prob: q must be non-negative");
  return 2.0 * q * link_efficiency(eta, eta_d, l0_km, latt_km);
}

}  // namespace fluorep
