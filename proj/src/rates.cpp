#include "fluorep/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fluorep {

SchemeModel build_scheme_model(const ChainConfig& chain, const PhysicalParams& physical,
                               const LinkParams& link, const RatesKnobs& knobs,
                               std::optional<double> pir_delta_override) {
  SchemeModel model;
  model.scheme = chain.scheme;
  model.attempt_period = link.l0_km * 1000.0 / chain.fiber_light_speed;

  const double p0 = generation_success_prob(link.q, physical.eta, link.eta_d, link.l0_km,
                                            link.latt_km);
  model.generation_prob = is_dual_rail(chain.scheme) ? p0 * p0 : p0;

  if (is_new_scheme(chain.scheme)) {
    model.swap_base_prob = swap_success_ideal(physical.n_atoms);
    if (chain.pir_enabled) {
      const PirResult window = pir_window(physical, kPirFeasibilityMargin);
      if (!window.feasible)
        throw std::domain_error(
            "interrupted retrieval infeasible: optical depth below the window margin");
      double delta = window.delta_loss;
      if (pir_delta_override) delta = std::clamp(*pir_delta_override, 0.0, 1.0);
      model.pir_delta = delta;
      model.connection_efficiency = link.eta_f * (1.0 - delta);
      model.multi_scale = link.q * pir_suppression(physical.eta, delta, physical.depth_d);
    } else {
      model.pir_delta = 0.0;
      model.connection_efficiency = link.eta_f;
      model.multi_scale = link.q;
    }
  } else {
    // Parametric reference: retrieval loss improves with optical depth, and
    // the retrieved photon still has to be detected.
    model.swap_base_prob = 0.5;
    const double retrieval = 1.0 - knobs.ref_c_r / std::sqrt(physical.depth_d);
    model.connection_efficiency = std::max(0.0, retrieval) * knobs.ref_eta_d;
    model.multi_scale = link.q;
    model.pir_delta = 0.0;
  }
  return model;
}

RateResult analytic_rate(const SchemeModel& model, const ChainConfig& chain) {
  if (!(model.generation_prob > 0))
    throw std::domain_error("analytic_rate: generation probability is zero");
  if (!(model.attempt_period > 0))
    throw std::domain_error("analytic_rate: attempt_period must be positive");
  double t = model.attempt_period / std::min(1.0, model.generation_prob);
  if (chain.nesting_s > 0) {
    const double p_swap = model.swap_base_prob * model.connection_efficiency;
    if (!(p_swap > 0)) throw std::domain_error("analytic_rate: swap probability is zero");
    for (int level = 0; level < chain.nesting_s; ++level) t = 1.5 * t / std::min(1.0, p_swap);
  }
  RateResult result;
  result.rate_hz = 1.0 / t;
  result.chain = chain;
  return result;
}

FidelityBudget fidelity_budget(const SchemeModel& model, const ChainConfig& chain,
                               const PhysicalParams& physical, const LinkParams& link,
                               const RatesKnobs& knobs) {
  const double segments = std::pow(2.0, chain.nesting_s);
  const double eta_prime =
      link_efficiency(physical.eta, link.eta_d, link.l0_km, link.latt_km);

  const double multi =
      std::clamp(knobs.kappa_m * model.multi_scale * segments * segments, 0.0, 1.0);
  const double mismatch = std::clamp(
      (segments - 1.0) * mismatch_separable_prob(physical.beta, eta_prime, physical.n_atoms),
      0.0, 1.0);
  const double dark = std::clamp(
      (segments - 1.0) * std::min(1.0, dark_count_expectation(physical, link)), 0.0, 1.0);

  FidelityBudget out;
  out.budget["multiexcitation"] = multi;
  out.budget["mismatch"] = mismatch;
  out.budget["dark_count"] = dark;
  out.budget["pir_loss"] = model.pir_delta; // rate cost, shown for visibility
  out.fidelity = std::max(0.0, 1.0 - multi - mismatch - dark);
  return out;
}

MaxQResult max_q_for_fidelity(const ChainConfig& chain, const PhysicalParams& physical,
                              const LinkParams& link_template, double target_fidelity,
                              const RatesKnobs& knobs) {
  if (!(target_fidelity > 0 && target_fidelity < 1))
    throw std::domain_error("max_q_for_fidelity: target must be in (0,1)");

  auto fidelity_at = [&](double q) {
    LinkParams link = link_template;
    link.q = q;
    const SchemeModel model = build_scheme_model(chain, physical, link, knobs);
    return fidelity_budget(model, chain, physical, link, knobs).fidelity;
  };

  // The q-independent floor decides reachability; the budget is monotone
  // non-increasing in q, so bisection applies.
  const double floor_q = 1e-300;
  if (fidelity_at(floor_q) < target_fidelity) return MaxQResult{0.0, false};

  double lo = floor_q;
  double hi = 1.0 - 1e-9;
  if (fidelity_at(hi) >= target_fidelity) return MaxQResult{hi, true};
  while ((hi - lo) > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (fidelity_at(mid) >= target_fidelity)
      lo = mid;
    else
      hi = mid;
  }
  return MaxQResult{lo, true};
}

}  // namespace fluorep
