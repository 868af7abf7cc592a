#include "fluorep/model.hpp"

#include <cmath>
#include <sstream>

#include "fluorep/physics.hpp"

namespace fluorep {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::NewSingleRail: return "NewSingleRail";
    case Scheme::NewDualRail: return "NewDualRail";
    case Scheme::RefDlcz: return "RefDlcz";
    case Scheme::RefDualRail: return "RefDualRail";
  }
  return "NewSingleRail";
}

bool scheme_from_name(const std::string& name, Scheme* out) {
  if (name == "NewSingleRail") { *out = Scheme::NewSingleRail; return true; }
  if (name == "NewDualRail") { *out = Scheme::NewDualRail; return true; }
  if (name == "RefDlcz") { *out = Scheme::RefDlcz; return true; }
  if (name == "RefDualRail") { *out = Scheme::RefDualRail; return true; }
  return false;
}

const char* frequency_units_name(FrequencyUnits u) {
  return u == FrequencyUnits::HzOver2Pi ? "hz_over_2pi" : "rad_per_s";
}

bool frequency_units_from_name(const std::string& name, FrequencyUnits* out) {
  if (name == "hz_over_2pi") { *out = FrequencyUnits::HzOver2Pi; return true; }
  if (name == "rad_per_s") { *out = FrequencyUnits::RadPerS; return true; }
  return false;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

ValidationReport validate(const PhysicalParams& physical, const LinkParams& link,
                          const ChainConfig& chain) {
  ValidationReport report;
  auto err = [&report](const std::string& m) { report.errors.push_back(m); };

  if (!(physical.gamma > 0)) err("physical.gamma must be positive");
  if (!(physical.delta > 0)) err("physical.delta must be positive");
  if (!(physical.beta >= 0 && physical.beta <= 1)) err("physical.beta must be in [0,1]");
  if (!(physical.omega_p >= 0)) err("physical.omega_p must be non-negative");
  if (!(physical.omega_c >= 0)) err("physical.omega_c must be non-negative");
  if (!(physical.length_l > 0)) err("physical.length_l must be positive");
  if (!(physical.depth_d > 0)) err("physical.depth_d must be positive");
  if (!(physical.eta > 0 && physical.eta < 1)) err("physical.eta must be in (0,1)");
  if (physical.n_atoms < 1) err("physical.n_atoms must be at least 1");

  if (!(link.l0_km > 0)) err("link.l0_km must be positive");
  if (!(link.latt_km > 0)) err("link.latt_km must be positive");
  if (!(link.q > 0 && link.q < 1)) err("link.q must be in (0,1)");
  if (!(link.eta_d > 0 && link.eta_d <= 1)) err("link.eta_d must be in (0,1]");
  if (!(link.eta_f > 0 && link.eta_f <= 1)) err("link.eta_f must be in (0,1]");
  if (link.n_photons < 1) err("link.n_photons must be at least 1");

  if (!(chain.total_km > 0)) err("chain.total_km must be positive");
  if (chain.nesting_s < 0) err("chain.nesting_s must be non-negative");
  if (chain.nesting_s > 30) err("chain.nesting_s must be at most 30");
  if (!(chain.target_fidelity > 0 && chain.target_fidelity < 1))
    err("chain.target_fidelity must be in (0,1)");
  if (!(chain.fiber_light_speed > 0)) err("chain.fiber_light_speed must be positive");

  if (!report.errors.empty()) return report;

  // Regime assumptions behind the leading-order formulas; violations degrade
  // the model rather than break it, so they are warnings.
  const double etaq = physical.eta * link.q;
  if (etaq > 0.1) {
    report.warnings.push_back("eta*q = " + fmt(etaq) +
                              " exceeds 0.1; the single-click expansion assumes eta*q << 1");
  }
  const double drive = std::max(physical.gamma, physical.omega_p);
  if (physical.delta < 10.0 * drive) {
    report.warnings.push_back(
        "physical.delta = " + fmt(physical.delta) +
        " is below 10*max(gamma, omega_p); off-resonant leak formulas assume a large detuning");
  }
  const double eta_prime =
      link_efficiency(physical.eta, link.eta_d, link.l0_km, link.latt_km);
  const double occupancy = physical.beta * eta_prime * static_cast<double>(physical.n_atoms);
  if (occupancy < 10.0) {
    report.warnings.push_back(
        "beta*eta'*N = " + fmt(occupancy) +
        " is below 10; occupied-ensemble detection assumes beta*eta'*N >> 1");
  }
  return report;
}

}  // namespace fluorep
