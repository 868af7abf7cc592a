#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fluorep/optimizer.hpp"

using namespace fluorep;
using doctest::Approx;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

// Strontium-like headline parameters; distances and schemes vary per test.
Config sr_base() {
  Config c;
  c.units = FrequencyUnits::RadPerS;
  c.physical.gamma = kTwoPi * 3.0e7;
  c.physical.delta = kTwoPi * 1.0e13;
  c.physical.beta = 0.99999999;
  c.physical.omega_p = kTwoPi * 3.0e6;
  c.physical.omega_c = kTwoPi * 3.0e7;
  c.physical.length_l = 1.0e-3;
  c.physical.depth_d = 100.0;
  c.physical.eta = 0.05;
  c.physical.n_atoms = 10000;
  c.link.l0_km = 125.0;
  c.link.latt_km = 20.0;
  c.link.q = 0.01;
  c.link.eta_d = 0.4;
  c.link.eta_f = 0.95;
  c.link.n_photons = 20;
  c.chain.total_km = 1000.0;
  c.chain.nesting_s = 3;
  c.chain.scheme = Scheme::NewSingleRail;
  c.chain.target_fidelity = 0.9;
  c.chain.pir_enabled = true;
  return c;
}

}  // namespace

TEST_CASE("short distance with a loose target prefers no nesting") {
  const OptimizationResult r =
      optimize_at_distance(1.0, Scheme::NewSingleRail, 0.5, sr_base());
  REQUIRE(r.feasible);
  CHECK(r.best.chain.nesting_s == 0);
  CHECK(r.best.rate_hz > 0.0);
}

TEST_CASE("headline distance picks 8 segments and meets the target") {
  const OptimizationResult r =
      optimize_at_distance(1000.0, Scheme::NewSingleRail, 0.9, sr_base());
  REQUIRE(r.feasible);
  CHECK(r.best.chain.nesting_s == 3);
  CHECK(r.best.fidelity >= 0.9 - 1e-6);
  CHECK(r.best.rate_hz == Approx(1.187e-3).epsilon(2e-3));
  CHECK(r.best.link.l0_km == Approx(125.0).epsilon(1e-12));
  // Budget keys are always present.
  CHECK(r.best.error_budget.count("multiexcitation") == 1);
  CHECK(r.best.error_budget.count("mismatch") == 1);
  CHECK(r.best.error_budget.count("dark_count") == 1);
  CHECK(r.best.error_budget.count("pir_loss") == 1);
}

TEST_CASE("headline rate advantage over the retrieval-based reference") {
  const OptimizationResult new_single =
      optimize_at_distance(1000.0, Scheme::NewSingleRail, 0.9, sr_base());
  const OptimizationResult ref =
      optimize_at_distance(1000.0, Scheme::RefDlcz, 0.9, sr_base());
  REQUIRE(new_single.feasible);
  REQUIRE(ref.feasible);
  const double ratio = new_single.best.rate_hz / ref.best.rate_hz;
  CHECK(ratio == Approx(156.6).epsilon(0.01));
}

TEST_CASE("grid trace is reproducible and contains the best point") {
  const Config base = sr_base();
  const OptimizationResult a =
      optimize_at_distance(1000.0, Scheme::NewSingleRail, 0.9, base);
  const OptimizationResult b =
      optimize_at_distance(1000.0, Scheme::NewSingleRail, 0.9, base);
  REQUIRE(a.grid_trace.size() == b.grid_trace.size());
  CHECK(a.grid_trace.size() == static_cast<std::size_t>(base.optimizer.s_max) + 1);
  bool best_found = false;
  for (std::size_t i = 0; i < a.grid_trace.size(); ++i) {
    CHECK(a.grid_trace[i].nesting_s == b.grid_trace[i].nesting_s);
    CHECK(a.grid_trace[i].q == b.grid_trace[i].q);
    CHECK(a.grid_trace[i].rate_hz == b.grid_trace[i].rate_hz);
    CHECK(a.grid_trace[i].feasible == b.grid_trace[i].feasible);
    if (a.grid_trace[i].feasible && a.grid_trace[i].rate_hz == a.best.rate_hz &&
        a.grid_trace[i].nesting_s == a.best.chain.nesting_s) {
      best_found = true;
      // No other feasible point beats it.
    }
    if (a.grid_trace[i].feasible) CHECK(a.grid_trace[i].rate_hz <= a.best.rate_hz);
  }
  CHECK(best_found);
}

TEST_CASE("infeasible everywhere: shallow ensemble with interruption required") {
  Config base = sr_base();
  base.physical.depth_d = 5.0; // below the feasibility margin
  const OptimizationResult r =
      optimize_at_distance(1000.0, Scheme::NewSingleRail, 0.9, base);
  CHECK_FALSE(r.feasible);
  for (const auto& g : r.grid_trace) CHECK_FALSE(g.feasible);
}

TEST_CASE("optimizer argument guards") {
  CHECK_THROWS_AS(optimize_at_distance(0.0, Scheme::NewSingleRail, 0.9, sr_base()),
                  std::invalid_argument);
  CHECK_THROWS_AS(optimize_at_distance(100.0, Scheme::NewSingleRail, 1.0, sr_base()),
                  std::invalid_argument);
}

TEST_CASE("sweep grid is log-spaced and deterministic across thread counts") {
  const Config base = sr_base();
  const SweepTable t1 = sweep_distances(100.0, 2000.0, 5, base, 1);
  const SweepTable t4 = sweep_distances(100.0, 2000.0, 5, base, 4);
  REQUIRE(t1.rows.size() == 5);
  REQUIRE(t4.rows.size() == 5);
  CHECK(t1.rows.front().distance_km == Approx(100.0).epsilon(1e-12));
  CHECK(t1.rows.back().distance_km == Approx(2000.0).epsilon(1e-12));
  // Middle point of a log grid: geometric mean of the endpoints.
  CHECK(t1.rows[2].distance_km == Approx(std::sqrt(100.0 * 2000.0)).epsilon(1e-12));
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(t1.rows[i].distance_km == t4.rows[i].distance_km);
    CHECK(t1.rows[i].new_single.rate_hz == t4.rows[i].new_single.rate_hz);
    CHECK(t1.rows[i].new_dual.rate_hz == t4.rows[i].new_dual.rate_hz);
    CHECK(t1.rows[i].ref_dlcz.rate_hz == t4.rows[i].ref_dlcz.rate_hz);
    CHECK(t1.rows[i].ref_dual.rate_hz == t4.rows[i].ref_dual.rate_hz);
    CHECK(t1.rows[i].ratio_single == t4.rows[i].ratio_single);
    CHECK(t1.rows[i].ratio_dual == t4.rows[i].ratio_dual);
  }
}

TEST_CASE("sweep rows: ratio identity and rate monotonicity") {
  const SweepTable t = sweep_distances(100.0, 2000.0, 7, sr_base());
  double prev_single = 0.0;
  double prev_ref = 0.0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const SweepRow& row = t.rows[i];
    REQUIRE(row.new_single.feasible);
    REQUIRE(row.ref_dlcz.feasible);
    CHECK(row.ratio_single ==
          Approx(row.new_single.rate_hz / row.ref_dlcz.rate_hz).epsilon(1e-12));
    CHECK(row.ratio_dual ==
          Approx(row.new_dual.rate_hz / row.ref_dual.rate_hz).epsilon(1e-12));
    if (i > 0) {
      CHECK(row.new_single.rate_hz <= prev_single * (1.0 + 1e-9));
      CHECK(row.ref_dlcz.rate_hz <= prev_ref * (1.0 + 1e-9));
    }
    prev_single = row.new_single.rate_hz;
    prev_ref = row.ref_dlcz.rate_hz;
  }
}

TEST_CASE("single-point sweep and argument guards") {
  const SweepTable t = sweep_distances(500.0, 500.0, 1, sr_base());
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].distance_km == Approx(500.0).epsilon(1e-12));
  CHECK_THROWS_AS(sweep_distances(100.0, 2000.0, 0, sr_base()), std::invalid_argument);
  CHECK_THROWS_AS(sweep_distances(0.0, 2000.0, 3, sr_base()), std::invalid_argument);
  CHECK_THROWS_AS(sweep_distances(2000.0, 100.0, 3, sr_base()), std::invalid_argument);
}
