#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fluorep {

// Repeater architecture variants. The "New" schemes connect neighboring links
// with a storage-level rotation followed by fluorescence readout of the shared
// node; the "Ref" schemes retrieve the spin wave and detect the photon.
enum class Scheme {
  NewSingleRail,
  NewDualRail,
  RefDlcz,
  RefDualRail,
};

// Interpretation of frequency-like config values (gamma, delta, omega_p,
// omega_c). HzOver2Pi means the file stores nu = omega / 2pi and values are
// multiplied by 2pi on load; RadPerS stores angular frequencies directly.
// Internally everything is an angular frequency in rad/s.
enum class FrequencyUnits {
  HzOver2Pi,
  RadPerS,
};

const char* scheme_name(Scheme s);
bool scheme_from_name(const std::string& name, Scheme* out);
const char* frequency_units_name(FrequencyUnits u);
bool frequency_units_from_name(const std::string& name, FrequencyUnits* out);

// Whether a scheme uses rotation + fluorescence for entanglement connection.
inline bool is_new_scheme(Scheme s) {
  return s == Scheme::NewSingleRail || s == Scheme::NewDualRail;
}
inline bool is_dual_rail(Scheme s) {
  return s == Scheme::NewDualRail || s == Scheme::RefDualRail;
}

// Ensemble and light-atom interaction parameters. All frequencies are angular
// (rad/s) once loaded; see FrequencyUnits.
struct PhysicalParams {
  double gamma = 0.0;      // excited-state linewidth, rad/s
  double delta = 0.0;      // detuning of the storage transition, rad/s
  double beta = 0.0;       // branching ratio into the storage level
  double omega_p = 0.0;    // probe Rabi frequency (fluorescence drive), rad/s
  double omega_c = 0.0;    // control Rabi frequency (retrieval drive), rad/s
  double length_l = 0.0;   // ensemble length, m
  double depth_d = 0.0;    // resonant optical depth
  double eta = 0.0;        // forward-scattering fraction of the symmetric mode
  long long n_atoms = 0;   // atoms per ensemble
};

// Per-link generation parameters.
struct LinkParams {
  double l0_km = 0.0;      // elementary segment length
  double latt_km = 0.0;    // fiber attenuation length
  double q = 0.0;          // spin-wave excitation probability per attempt
  double eta_d = 0.0;      // single-photon detector efficiency (generation)
  double eta_f = 0.0;      // fluorescence readout efficiency per excitation
  long long n_photons = 0; // fluorescence photons needed to discriminate occupation
};

// Chain-level configuration. The elementary segment length of a chain is
// total_km / 2^nesting_s.
struct ChainConfig {
  double total_km = 0.0;
  int nesting_s = 0;
  Scheme scheme = Scheme::NewSingleRail;
  double target_fidelity = 0.0;
  bool pir_enabled = false;
  double fiber_light_speed = 2.0e8; // m/s
};

// One evaluated operating point: rate, final fidelity, and the error budget
// that produced the fidelity. Budget keys: "multiexcitation", "mismatch",
// "dark_count", "pir_loss" (the last is informational, a rate cost rather
// than a fidelity cost).
struct RateResult {
  double rate_hz = 0.0;
  double fidelity = 1.0;
  std::map<std::string, double> error_budget;
  PhysicalParams physical;
  LinkParams link;
  ChainConfig chain;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

// Checks hard invariants (errors) and operating-regime assumptions
// (warnings): eta*q should stay well below 1, the detuning should dominate
// gamma and omega_p, and beta*eta'*N should be large enough that two spin
// waves in one ensemble are distinguishable from one.
ValidationReport validate(const PhysicalParams& physical, const LinkParams& link,
                          const ChainConfig& chain);

}  // namespace fluorep
