#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fluorep/physics.hpp"
#include "fluorep/rates.hpp"

using namespace fluorep;
using doctest::Approx;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

// Strontium-like long-chain operating point (8 segments of 125 km).
PhysicalParams sr_physical() {
  PhysicalParams p;
  p.gamma = kTwoPi * 3.0e7;
  p.delta = kTwoPi * 1.0e13;
  p.beta = 0.99999999;
  p.omega_p = kTwoPi * 3.0e6;
  p.omega_c = kTwoPi * 3.0e7;
  p.length_l = 1.0e-3;
  p.depth_d = 100.0;
  p.eta = 0.05;
  p.n_atoms = 10000;
  return p;
}

LinkParams sr_link() {
  LinkParams l;
  l.l0_km = 125.0;
  l.latt_km = 20.0;
  l.q = 0.01;
  l.eta_d = 0.4;
  l.eta_f = 0.95;
  l.n_photons = 20;
  return l;
}

ChainConfig sr_chain(Scheme scheme, bool pir) {
  ChainConfig c;
  c.total_km = 1000.0;
  c.nesting_s = 3;
  c.scheme = scheme;
  c.target_fidelity = 0.9;
  c.pir_enabled = pir;
  return c;
}

}  // namespace

TEST_CASE("scheme model: interrupted-retrieval connection efficiency") {
  const SchemeModel m =
      build_scheme_model(sr_chain(Scheme::NewSingleRail, true), sr_physical(), sr_link());
  // eta_f * (1 - delta) at the -2 ln(eta)/d loss target.
  CHECK(m.connection_efficiency == Approx(0.89308108680247417112).epsilon(1e-9));
  CHECK(m.pir_delta == Approx(0.059914645471079819869).epsilon(1e-9));
  // Suppressed multiexcitation scale: q * eta (2 - eta).
  CHECK(m.multi_scale == Approx(0.01 * 0.0975).epsilon(1e-9));
  CHECK(m.swap_base_prob == Approx(swap_success_ideal(10000)).epsilon(1e-12));
  // 125 km at 2e8 m/s.
  CHECK(m.attempt_period == Approx(6.25e-4).epsilon(1e-12));
}

TEST_CASE("scheme model: interruption disabled") {
  const SchemeModel m =
      build_scheme_model(sr_chain(Scheme::NewSingleRail, false), sr_physical(), sr_link());
  CHECK(m.connection_efficiency == Approx(0.95).epsilon(1e-12));
  CHECK(m.multi_scale == Approx(0.01).epsilon(1e-12));
  CHECK(m.pir_delta == 0.0);
}

TEST_CASE("scheme model: interruption infeasible at low optical depth") {
  PhysicalParams p = sr_physical();
  p.depth_d = 5.0;
  CHECK_THROWS_AS(
      build_scheme_model(sr_chain(Scheme::NewSingleRail, true), p, sr_link()),
      std::domain_error);
  // Feasible right at the margin.
  p.depth_d = kPirFeasibilityMargin;
  CHECK_NOTHROW(build_scheme_model(sr_chain(Scheme::NewSingleRail, true), p, sr_link()));
}

TEST_CASE("scheme model: reference schemes") {
  const SchemeModel m =
      build_scheme_model(sr_chain(Scheme::RefDlcz, true), sr_physical(), sr_link());
  // (1 - 1/sqrt(100)) * 0.4.
  CHECK(m.connection_efficiency == Approx(0.36).epsilon(1e-12));
  CHECK(m.swap_base_prob == Approx(0.5).epsilon(1e-12));
  CHECK(m.multi_scale == Approx(0.01).epsilon(1e-12));
  CHECK(m.pir_delta == 0.0);
}

TEST_CASE("scheme model: dual rail squares the generation probability") {
  const SchemeModel single =
      build_scheme_model(sr_chain(Scheme::NewSingleRail, true), sr_physical(), sr_link());
  const SchemeModel dual =
      build_scheme_model(sr_chain(Scheme::NewDualRail, true), sr_physical(), sr_link());
  CHECK(dual.generation_prob ==
        Approx(single.generation_prob * single.generation_prob).epsilon(1e-12));
  CHECK(dual.connection_efficiency == Approx(single.connection_efficiency).epsilon(1e-12));
}

TEST_CASE("scheme model: interruption loss override") {
  const SchemeModel m = build_scheme_model(sr_chain(Scheme::NewSingleRail, true),
                                           sr_physical(), sr_link(), {}, 0.0);
  CHECK(m.pir_delta == 0.0);
  CHECK(m.connection_efficiency == Approx(0.95).epsilon(1e-12));
  // No interruption means no suppression of the non-symmetric background.
  CHECK(m.multi_scale == Approx(0.01).epsilon(1e-12));
}

TEST_CASE("analytic rate: no nesting is generation-limited") {
  ChainConfig chain = sr_chain(Scheme::NewSingleRail, true);
  chain.nesting_s = 0;
  const SchemeModel m = build_scheme_model(chain, sr_physical(), sr_link());
  const RateResult r = analytic_rate(m, chain);
  CHECK(r.rate_hz == Approx(m.generation_prob / m.attempt_period).epsilon(1e-12));
}

TEST_CASE("analytic rate: one doubling level") {
  ChainConfig chain = sr_chain(Scheme::NewSingleRail, true);
  chain.nesting_s = 1;
  const SchemeModel m = build_scheme_model(chain, sr_physical(), sr_link());
  const RateResult r = analytic_rate(m, chain);
  const double p_swap = m.swap_base_prob * m.connection_efficiency;
  const double expected =
      1.0 / (1.5 * (m.attempt_period / m.generation_prob) / p_swap);
  CHECK(r.rate_hz == Approx(expected).epsilon(1e-12));
}

TEST_CASE("fidelity budget: floors and scaling") {
  const PhysicalParams p = sr_physical();
  const LinkParams l = sr_link();
  ChainConfig chain = sr_chain(Scheme::NewSingleRail, true);
  const double eta_prime = link_efficiency(p.eta, l.eta_d, l.l0_km, l.latt_km);

  chain.nesting_s = 0;
  SchemeModel m = build_scheme_model(chain, p, l);
  FidelityBudget b0 = fidelity_budget(m, chain, p, l);
  CHECK(b0.budget.at("mismatch") == 0.0);
  CHECK(b0.budget.at("dark_count") == 0.0);
  CHECK(b0.budget.at("multiexcitation") == Approx(m.multi_scale).epsilon(1e-12));
  CHECK(b0.budget.at("pir_loss") == Approx(m.pir_delta).epsilon(1e-12));

  chain.nesting_s = 2; // 4 segments
  m = build_scheme_model(chain, p, l);
  FidelityBudget b2 = fidelity_budget(m, chain, p, l);
  CHECK(b2.budget.at("multiexcitation") == Approx(16.0 * m.multi_scale).epsilon(1e-12));
  CHECK(b2.budget.at("mismatch") ==
        Approx(3.0 * mismatch_separable_prob(p.beta, eta_prime, p.n_atoms)).epsilon(1e-12));
  CHECK(b2.budget.at("dark_count") ==
        Approx(3.0 * std::min(1.0, dark_count_expectation(p, l))).epsilon(1e-12));
  CHECK(b2.fidelity ==
        Approx(1.0 - b2.budget.at("multiexcitation") - b2.budget.at("mismatch") -
               b2.budget.at("dark_count"))
            .epsilon(1e-12));
}

TEST_CASE("fidelity budget: terms clamp and fidelity floors at zero") {
  const PhysicalParams p = sr_physical();
  const LinkParams l = sr_link();
  ChainConfig chain = sr_chain(Scheme::NewSingleRail, true);
  chain.nesting_s = 4;
  RatesKnobs knobs;
  knobs.kappa_m = 1e9;
  const SchemeModel m = build_scheme_model(chain, p, l, knobs);
  const FidelityBudget b = fidelity_budget(m, chain, p, l, knobs);
  CHECK(b.budget.at("multiexcitation") == 1.0);
  CHECK(b.fidelity == 0.0);
}

TEST_CASE("largest q meeting the target: self-consistency") {
  const PhysicalParams p = sr_physical();
  const LinkParams l = sr_link();
  for (int s : {0, 2, 3}) {
    ChainConfig chain = sr_chain(Scheme::NewSingleRail, true);
    chain.nesting_s = s;
    const MaxQResult mq = max_q_for_fidelity(chain, p, l, 0.9);
    REQUIRE(mq.reachable);
    REQUIRE(mq.q > 0.0);

    auto fidelity_at = [&](double q) {
      LinkParams lq = l;
      lq.q = q;
      const SchemeModel m = build_scheme_model(chain, p, lq);
      return fidelity_budget(m, chain, p, lq).fidelity;
    };
    CHECK(fidelity_at(mq.q) >= 0.9 - 1e-6);
    if (mq.q < 0.99) CHECK(fidelity_at(mq.q * 1.01) < 0.9);
  }
}

TEST_CASE("largest q: unreachable when floors exceed the budget") {
  PhysicalParams p = sr_physical();
  p.beta = 0.01; // mismatch floor blows up
  LinkParams l = sr_link();
  ChainConfig chain = sr_chain(Scheme::NewSingleRail, true);
  chain.nesting_s = 4;
  const MaxQResult mq = max_q_for_fidelity(chain, p, l, 0.95);
  CHECK_FALSE(mq.reachable);
  CHECK(mq.q == 0.0);
}

TEST_CASE("largest q: interruption buys back multiexcitation headroom") {
  const PhysicalParams p = sr_physical();
  const LinkParams l = sr_link();
  ChainConfig on = sr_chain(Scheme::NewSingleRail, true);
  ChainConfig off = sr_chain(Scheme::NewSingleRail, false);
  const MaxQResult q_on = max_q_for_fidelity(on, p, l, 0.9);
  const MaxQResult q_off = max_q_for_fidelity(off, p, l, 0.9);
  REQUIRE(q_on.reachable);
  REQUIRE(q_off.reachable);
  // The multiexcitation term dominates here, so the admissible q scales with
  // 1/suppression = 1/(eta (2 - eta)).
  CHECK(q_on.q / q_off.q == Approx(1.0 / 0.0975).epsilon(1e-4));
}

TEST_CASE("analytic rate guards") {
  ChainConfig chain = sr_chain(Scheme::NewSingleRail, true);
  SchemeModel m = build_scheme_model(chain, sr_physical(), sr_link());
  m.generation_prob = 0.0;
  CHECK_THROWS_AS(analytic_rate(m, chain), std::domain_error);
}
