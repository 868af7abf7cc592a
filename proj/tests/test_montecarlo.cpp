#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fluorep/montecarlo.hpp"
#include "fluorep/rng.hpp"

using namespace fluorep;
using doctest::Approx;

namespace {

SchemeModel toy_model(double p0, double p_swap, double period) {
  SchemeModel m;
  m.scheme = Scheme::NewSingleRail;
  m.generation_prob = p0;
  m.swap_base_prob = p_swap;
  m.connection_efficiency = 1.0;
  m.attempt_period = period;
  m.multi_scale = p0;
  return m;
}

ChainConfig chain_with(int s) {
  ChainConfig c;
  c.total_km = 100.0;
  c.nesting_s = s;
  c.scheme = Scheme::NewSingleRail;
  c.target_fidelity = 0.9;
  return c;
}

}  // namespace

TEST_CASE("closed-form two-link expectation") {
  // (2/p0 - 1/(1 - (1-p0)^2)) / p_swap, scaled by the attempt period.
  CHECK(exact_two_link_expectation(0.5, 0.5, 1.0) == Approx(16.0 / 3.0).epsilon(1e-12));
  CHECK(exact_two_link_expectation(0.25, 0.8, 1.0) == Approx(50.0 / 7.0).epsilon(1e-12));
  CHECK(exact_two_link_expectation(1.0, 1.0, 1.0) == Approx(1.0).epsilon(1e-12));
  CHECK(exact_two_link_expectation(0.5, 0.5, 2.5) ==
        Approx(2.5 * 16.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(exact_two_link_expectation(0.0, 0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(exact_two_link_expectation(0.5, 0.0, 1.0), std::domain_error);
}

TEST_CASE("geometric sampler matches its inversion formula") {
  Xoshiro256pp rng = trial_stream(9001, 0);
  double mean = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) mean += static_cast<double>(sample_geometric(rng, 0.35));
  mean /= n;
  // E = 1/p = 2.857; SE = sqrt((1-p)/p^2 / n) ~ 0.0052.
  CHECK(std::abs(mean - 1.0 / 0.35) < 3.0 * std::sqrt(0.65 / (0.35 * 0.35) / n));
  Xoshiro256pp rng2 = trial_stream(9001, 0);
  CHECK(sample_geometric(rng2, 1.0) == 1);
}

TEST_CASE("deterministic corner: certain generation and connection") {
  SimConfig sim;
  sim.trials = 100;
  sim.seed = 5;
  for (int s : {0, 1, 3}) {
    const SimEstimate est = simulate_chain(toy_model(1.0, 1.0, 2.0e-4), chain_with(s), sim);
    CHECK(est.mean_time_s == Approx(2.0e-4).epsilon(1e-15));
    CHECK(est.std_error_s == 0.0);
    CHECK(est.rate_hz == Approx(5000.0).epsilon(1e-12));
    CHECK(est.success_fraction == 1.0);
  }
}

TEST_CASE("attempt period scales times linearly and exactly") {
  SimConfig sim;
  sim.trials = 2000;
  sim.seed = 99;
  const SimEstimate a = simulate_chain(toy_model(0.2, 0.7, 1.0), chain_with(2), sim);
  const SimEstimate b = simulate_chain(toy_model(0.2, 0.7, 2.0), chain_with(2), sim);
  CHECK(b.mean_time_s == 2.0 * a.mean_time_s);
  CHECK(b.std_error_s == 2.0 * a.std_error_s);
}

TEST_CASE("estimates are bit-identical across thread counts") {
  SimConfig sim;
  sim.trials = 5001; // odd on purpose: uneven chunking
  sim.seed = 20260819;
  SimEstimate ref;
  bool have_ref = false;
  for (int threads : {1, 2, 3, 8}) {
    sim.max_threads = threads;
    const SimEstimate est = simulate_chain(toy_model(0.3, 0.6, 1.5e-4), chain_with(2), sim);
    if (!have_ref) {
      ref = est;
      have_ref = true;
    } else {
      CHECK(est.mean_time_s == ref.mean_time_s);
      CHECK(est.std_error_s == ref.std_error_s);
      CHECK(est.rate_hz == ref.rate_hz);
    }
  }
}

TEST_CASE("seed changes the sample, trial streams do not collide") {
  SimConfig sim;
  sim.trials = 2000;
  sim.seed = 1;
  const SimEstimate a = simulate_chain(toy_model(0.3, 0.6, 1.0), chain_with(1), sim);
  sim.seed = 2;
  const SimEstimate b = simulate_chain(toy_model(0.3, 0.6, 1.0), chain_with(1), sim);
  CHECK(a.mean_time_s != b.mean_time_s);
}

TEST_CASE("Monte Carlo agrees with the exact two-link oracle") {
  SimConfig sim;
  sim.trials = 100000;
  sim.seed = 777;
  const double p0 = 0.3;
  const double p_swap = 0.45;
  SchemeModel m = toy_model(p0, 0.5, 1.0);
  m.connection_efficiency = p_swap / 0.5;
  const SimEstimate est = simulate_chain(m, chain_with(1), sim);
  const double exact = exact_two_link_expectation(p0, p_swap, 1.0);
  CHECK(est.std_error_s > 0.0);
  CHECK(std::abs(est.mean_time_s - exact) < 3.0 * est.std_error_s);
}

TEST_CASE("single link is a plain geometric wait") {
  SimConfig sim;
  sim.trials = 100000;
  sim.seed = 31415;
  const SimEstimate est = simulate_chain(toy_model(0.1, 1.0, 1.0), chain_with(0), sim);
  CHECK(std::abs(est.mean_time_s - 10.0) < 3.0 * est.std_error_s);
}

TEST_CASE("attempt cap aborts the run") {
  SimConfig sim;
  sim.trials = 10;
  sim.seed = 4;
  sim.max_attempt_cap = 1000;
  CHECK_THROWS_AS(simulate_chain(toy_model(1e-7, 1.0, 1.0), chain_with(0), sim),
                  CapExceededError);
}

TEST_CASE("simulate_chain input guards") {
  SimConfig sim;
  sim.trials = 10;
  CHECK_THROWS_AS(simulate_chain(toy_model(0.0, 1.0, 1.0), chain_with(0), sim),
                  std::domain_error);
  CHECK_THROWS_AS(simulate_chain(toy_model(0.5, 0.0, 1.0), chain_with(1), sim),
                  std::domain_error);
  CHECK_THROWS_AS(simulate_chain(toy_model(0.5, 1.0, 0.0), chain_with(0), sim),
                  std::domain_error);
}
