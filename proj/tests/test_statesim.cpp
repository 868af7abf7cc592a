#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <vector>

#include "fluorep/exact.hpp"
#include "fluorep/statesim.hpp"

using namespace fluorep;
using doctest::Approx;

namespace {

// Blue link on nodes (0,1), red link on nodes (1,2), rotation on node 1,
// ideal fluorescence readout of node 1. Returns the probability of the
// single-excitation sector and the readout completeness.
struct ProtocolStats {
  double single_prob = 0.0;
  double completeness = 0.0;
  double min_corrected_fidelity = 1.0;
};

ProtocolStats run_protocol(std::optional<long long> finite_n) {
  const StateVector vac = StateVector::vacuum(3, 2, finite_n);
  const StateVector linked = prepare_link_ideal(
      prepare_link_ideal(vac, 0, 1, Level::Blue), 1, 2, Level::Red);
  const StateVector rotated = swap_rotation(linked, 1);
  const auto outcomes = fluorescent_measure(rotated, 1, 1.0, 0.0);

  const StateVector target = create_spin_wave(vac, 0, Level::Blue)
                                 .added(create_spin_wave(vac, 2, Level::Red))
                                 .normalized();
  ProtocolStats st;
  for (const auto& o : outcomes) {
    st.completeness += o.probability;
    if (o.label.true_blue + o.label.true_red != 1) continue;
    st.single_prob += o.probability;
    StateVector post = o.post_state;
    if (o.label.phase_flip) post = apply_level_phase(post, 0, Level::Blue);
    st.min_corrected_fidelity = std::min(st.min_corrected_fidelity, fidelity(post, target));
  }
  return st;
}

// Pseudorandom normalized 2-node state with at most 2 excitations per node.
StateVector random_state(std::mt19937_64& gen, std::optional<long long> finite_n) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  const StateVector vac = StateVector::vacuum(2, 2, finite_n);
  StateVector acc = vac.scaled({amp(gen), amp(gen)});
  for (int k = 0; k < 4; ++k) {
    StateVector term = vac;
    for (int node = 0; node < 2; ++node) {
      const int n_exc = coin(gen) + coin(gen);
      for (int e = 0; e < n_exc; ++e)
        term = create_spin_wave(term, node, coin(gen) ? Level::Blue : Level::Red);
    }
    acc = acc.added(term.scaled({amp(gen), amp(gen)}));
  }
  return acc.normalized();
}

}  // namespace

TEST_CASE("vacuum dimensions and amplitudes") {
  const StateVector v = StateVector::vacuum(3, 2);
  CHECK(v.dim() == 729); // (n_max + 1)^(2 * nodes)
  CHECK(v.norm() == Approx(1.0).epsilon(1e-15));
  CHECK(v.amplitude({0, 0, 0, 0, 0, 0}).real() == Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(v.truncated());
  CHECK_THROWS_AS(StateVector::vacuum(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(StateVector::vacuum(12, 9), std::length_error);
}

TEST_CASE("bosonic ladder factors") {
  const StateVector vac = StateVector::vacuum(1, 3);
  const StateVector one = create_spin_wave(vac, 0, Level::Blue);
  const StateVector two = create_spin_wave(one, 0, Level::Blue);
  CHECK(one.amplitude({1, 0}).real() == Approx(1.0).epsilon(1e-15));
  CHECK(two.amplitude({2, 0}).real() == Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(two.norm() == Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("finite-N creation factors") {
  // One blue plus one red spin wave in a 3-atom node: squared norm 1 - 1/N.
  const StateVector vac = StateVector::vacuum(1, 2, 3);
  const StateVector br =
      create_spin_wave(create_spin_wave(vac, 0, Level::Blue), 0, Level::Red);
  CHECK(br.norm() * br.norm() == Approx(2.0 / 3.0).epsilon(1e-12));
  // A single atom cannot host two excitations.
  const StateVector vac1 = StateVector::vacuum(1, 2, 1);
  const StateVector dd =
      create_spin_wave(create_spin_wave(vac1, 0, Level::Blue), 0, Level::Blue);
  CHECK(dd.norm() == Approx(0.0).epsilon(1e-15));
}

TEST_CASE("truncation flag is sticky and accurate") {
  const StateVector vac = StateVector::vacuum(1, 2);
  StateVector s = vac;
  for (int i = 0; i < 2; ++i) s = create_spin_wave(s, 0, Level::Blue);
  CHECK_FALSE(s.truncated());
  s = create_spin_wave(s, 0, Level::Blue); // falls off the n_max = 2 cutoff
  CHECK(s.truncated());
  CHECK(s.norm() == Approx(0.0).epsilon(1e-15));
}

TEST_CASE("ideal link preparation") {
  const StateVector vac = StateVector::vacuum(2, 2);
  const StateVector link = prepare_link_ideal(vac, 0, 1, Level::Blue);
  CHECK(link.norm() == Approx(1.0).epsilon(1e-12));
  CHECK(link.amplitude({1, 0, 0, 0}).real() == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(link.amplitude({0, 0, 1, 0}).real() == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("two-link connection: bosonic success probability and fidelity") {
  const ProtocolStats st = run_protocol(std::nullopt);
  CHECK(st.completeness == Approx(1.0).epsilon(1e-12));
  CHECK(st.single_prob == Approx(0.5).epsilon(1e-12));
  CHECK(st.min_corrected_fidelity == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-link connection matches the exact finite-N enumeration") {
  for (int n = 1; n <= 4; ++n) {
    const Rational exact = brute_force_swap_success(n);
    const ProtocolStats st = run_protocol(n);
    CHECK(st.completeness == Approx(1.0).epsilon(1e-12));
    CHECK(st.single_prob / st.completeness == Approx(exact.to_double()).epsilon(1e-12));
    CHECK(st.min_corrected_fidelity == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("exact enumeration reduces to 2N/(4N-1)") {
  for (int n = 1; n <= 6; ++n) {
    const Rational expected(2LL * n, 4LL * n - 1);
    CHECK(brute_force_swap_success(n) == expected);
  }
  CHECK(brute_force_swap_success(1).str() == "2/3");
  CHECK(brute_force_swap_success(4).str() == "8/15");
  CHECK_THROWS_AS(brute_force_swap_success(0), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_swap_success(7), std::length_error);
}

TEST_CASE("rational arithmetic basics") {
  const Rational a(3, 6);
  CHECK(a.num == 1);
  CHECK(a.den == 2);
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(2, 3) * Rational(3, 4)) == Rational(1, 2));
  CHECK((Rational(1, 2) / Rational(3, 2)) == Rational(1, 3));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(2, -4).num == -1);
  CHECK(Rational(2, -4).den == 2);
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("rotation is a norm-preserving involution") {
  std::mt19937_64 gen(20260819);
  for (int rep = 0; rep < 40; ++rep) {
    for (std::optional<long long> fn :
         {std::optional<long long>{}, std::optional<long long>{3}, std::optional<long long>{50}}) {
      const StateVector s = random_state(gen, fn);
      const StateVector r = swap_rotation(s, rep % 2);
      CHECK(r.norm() == Approx(1.0).epsilon(1e-12));
      const StateVector rr = swap_rotation(r, rep % 2);
      CHECK(fidelity(rr, s) == Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("readout probabilities are complete for lossy detection") {
  std::mt19937_64 gen(31337);
  for (int rep = 0; rep < 20; ++rep) {
    const StateVector s = random_state(gen, rep % 2 ? std::optional<long long>{7}
                                                    : std::optional<long long>{});
    for (double eta_f : {1.0, 0.6}) {
      for (double lam : {0.0, 0.3, 1.0}) {
        const auto outcomes = fluorescent_measure(s, 0, eta_f, lam);
        double total = 0.0;
        for (const auto& o : outcomes) {
          total += o.probability;
          CHECK(o.probability > 0.0);
          // Measured node is reset.
          CHECK(o.post_state.norm() == Approx(1.0).epsilon(1e-9));
        }
        CHECK(total == Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("readout labels: thinning and false counts") {
  const StateVector vac = StateVector::vacuum(1, 2);
  const StateVector one = create_spin_wave(vac, 0, Level::Blue);
  const auto outcomes = fluorescent_measure(one, 0, 0.6, 0.2);
  double p_detected_zero = 0.0;
  double p_detected_one_true = 0.0;
  for (const auto& o : outcomes) {
    CHECK(o.label.true_blue == 1);
    CHECK(o.label.true_red == 0);
    if (o.label.total_detected() == 0) p_detected_zero += o.probability;
    if (o.label.detected_blue == 1 && o.label.dark == 0) p_detected_one_true += o.probability;
  }
  // Miss the real excitation and add no false count: (1 - 0.6) * (1 - 0.2).
  CHECK(p_detected_zero == Approx(0.4 * 0.8).epsilon(1e-12));
  // See it and add no false count: 0.6 * 0.8.
  CHECK(p_detected_one_true == Approx(0.6 * 0.8).epsilon(1e-12));
  CHECK_THROWS_AS(fluorescent_measure(one, 0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(fluorescent_measure(one, 0, 0.5, 1.5), std::domain_error);
}

TEST_CASE("noisy link generation: weights and multiexcitation ratio") {
  const StateVector vac = StateVector::vacuum(2, 2);
  for (double q : {1e-3, 1e-2}) {
    for (double eta : {0.3, 0.05}) {
      const auto parts = prepare_link_noisy(vac, 0, 1, Level::Blue, q, eta);
      double total = 0.0;
      double w_single = 0.0;
      double w_double = 0.0;
      for (const auto& c : parts) {
        total += c.weight;
        CHECK(c.weight > 0.0);
        CHECK(c.state.norm() == Approx(1.0).epsilon(1e-9));
        // Classify by the coherent content: one shared excitation vs two.
        if (std::abs(c.state.amplitude({1, 0, 0, 0})) > 1e-12) w_single += c.weight;
        if (std::abs(c.state.amplitude({2, 0, 0, 0})) > 1e-12) w_double += c.weight;
      }
      CHECK(total == Approx(1.0).epsilon(1e-12));
      // Second-order component relative to the heralded single excitation.
      CHECK(w_double / w_single == Approx(eta * q).epsilon(1e-9));
    }
  }
  // Incoherent labels appear with probability (1 - eta) q per node.
  const auto parts = prepare_link_noisy(vac, 0, 1, Level::Blue, 0.01, 0.3);
  double w_inc_a = 0.0;
  for (const auto& c : parts)
    if (c.incoherent_a > 0) w_inc_a += c.weight;
  CHECK(w_inc_a == Approx((1.0 - 0.3) * 0.01).epsilon(1e-9));
  CHECK_THROWS_AS(prepare_link_noisy(vac, 0, 1, Level::Blue, 0.9, 0.7), std::domain_error);
}

TEST_CASE("level phase flips odd occupations") {
  const StateVector vac = StateVector::vacuum(1, 2);
  const StateVector one = create_spin_wave(vac, 0, Level::Blue);
  const StateVector sum = vac.added(one).normalized();
  const StateVector flipped = apply_level_phase(sum, 0, Level::Blue);
  CHECK(flipped.amplitude({0, 0}).real() == Approx(sum.amplitude({0, 0}).real()).epsilon(1e-15));
  CHECK(flipped.amplitude({1, 0}).real() ==
        Approx(-sum.amplitude({1, 0}).real()).epsilon(1e-15));
  // Involution.
  CHECK(fidelity(apply_level_phase(flipped, 0, Level::Blue), sum) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("fidelity and basis compatibility") {
  const StateVector vac2 = StateVector::vacuum(2, 2);
  const StateVector a = prepare_link_ideal(vac2, 0, 1, Level::Blue);
  const StateVector b = prepare_link_ideal(vac2, 0, 1, Level::Red);
  CHECK(fidelity(a, a) == Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(a, b) == Approx(0.0).epsilon(1e-12));
  const StateVector vac3 = StateVector::vacuum(3, 2);
  CHECK_FALSE(a.same_basis(vac3));
  CHECK_THROWS_AS(fidelity(a, vac3), std::invalid_argument);
}
