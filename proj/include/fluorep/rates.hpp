#pragma once

#include <optional>

#include "fluorep/config.hpp"
#include "fluorep/model.hpp"
#include "fluorep/physics.hpp"

namespace fluorep {

// Feasibility margin for enabling interrupted retrieval: the window ratio
// t_max / t_min equals depth_d, so an interruption is considered usable only
// when depth_d is at least this factor.
inline constexpr double kPirFeasibilityMargin = 10.0;

// Scheme-level reduction of the physics inputs: everything the rate
// recursion and the fidelity budget need.
struct SchemeModel {
  Scheme scheme = Scheme::NewSingleRail;
  double connection_efficiency = 0.0; // per-swap readout/retrieval efficiency
  double generation_prob = 0.0;       // per-attempt elementary success (squared for dual rail)
  double attempt_period = 0.0;        // s, communication-limited
  double swap_base_prob = 0.0;        // ideal connection success
  double multi_scale = 0.0;           // per-link multiexcitation error scale
  double pir_delta = 0.0;             // interruption loss in use (0 when off)
};

// Builds the per-scheme model.
//
// New schemes: connection_efficiency = eta_f * (1 - delta) with
// delta = pir_cost_for_target when PIR is enabled (eta_f alone otherwise);
// multi_scale = q * pir_suppression with PIR, q without, because the
// fluorescence readout responds to every excitation, not only the symmetric
// mode. Enabling PIR with an infeasible window (depth_d <
// kPirFeasibilityMargin) throws std::domain_error.
//
// Reference schemes: connection_efficiency = (1 - ref_c_r / sqrt(depth_d)) *
// ref_eta_d (retrieval loss falling off with optical depth times the
// connection detector), multi_scale = q, swap_base_prob = 1/2.
//
// Dual-rail variants square the generation probability per link pair and
// keep the same connection efficiencies; this is a structural approximation,
// not a full two-rail bookkeeping.
//
// pir_delta_override substitutes the interruption loss (used by the
// co-optimization scan); ignored when PIR is off.
SchemeModel build_scheme_model(const ChainConfig& chain, const PhysicalParams& physical,
                               const LinkParams& link, const RatesKnobs& knobs = {},
                               std::optional<double> pir_delta_override = std::nullopt);

// Expected entanglement distribution rate of the doubling recursion:
// T_gen = attempt_period / generation_prob, then per nesting level
// T_{i+1} = (3/2) T_i / (swap_base_prob * connection_efficiency), and
// rate = 1 / T_s. Throws std::domain_error when any probability is zero.
// Only rate_hz and chain are filled on the result; fidelity and budget come
// from fidelity_budget.
RateResult analytic_rate(const SchemeModel& model, const ChainConfig& chain);

struct FidelityBudget {
  double fidelity = 1.0;
  std::map<std::string, double> budget;
};

// Error budget at nesting level s with n = 2^s segments:
//   multiexcitation: kappa_m * multi_scale * n^2
//   mismatch:        (n - 1) * mismatch_separable_prob
//   dark_count:      (n - 1) * min(1, dark_count_expectation)
// fidelity = max(0, 1 - sum). "pir_loss" is reported alongside for
// visibility but not subtracted; it is a rate cost.
FidelityBudget fidelity_budget(const SchemeModel& model, const ChainConfig& chain,
                               const PhysicalParams& physical, const LinkParams& link,
                               const RatesKnobs& knobs = {});

struct MaxQResult {
  double q = 0.0;
  bool reachable = false;
};

// Largest q in (0, 1) whose budget still meets target_fidelity, found by
// bisection to 1e-6 relative width. The budget floors (mismatch, dark) do
// not depend on q; when they alone exceed the budget the target is
// unreachable and q = 0 is returned with reachable = false.
MaxQResult max_q_for_fidelity(const ChainConfig& chain, const PhysicalParams& physical,
                              const LinkParams& link_template, double target_fidelity,
                              const RatesKnobs& knobs = {});

}  // namespace fluorep
