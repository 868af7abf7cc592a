#include "fluorep/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fluorep/config.hpp"
#include "fluorep/csv.hpp"
#include "fluorep/exact.hpp"
#include "fluorep/montecarlo.hpp"
#include "fluorep/optimizer.hpp"
#include "fluorep/physics.hpp"
#include "fluorep/rates.hpp"
#include "fluorep/statesim.hpp"

namespace fluorep {

namespace {

std::string g9(double v) { return format_g9(v); }

// REPEATER_THREADS caps internal parallelism; empty/unset means no cap.
// Anything but a positive integer is a usage error.
bool thread_cap_from_env(int* cap, std::string* error) {
  *cap = 0;
  const char* raw = std::getenv("REPEATER_THREADS");
  if (!raw || !*raw) return true;
  char* end = nullptr;
  const long long v = std::strtoll(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 1 || v > 1 << 20) {
    *error = "REPEATER_THREADS must be a positive integer, got '" + std::string(raw) + "'";
    return false;
  }
  *cap = static_cast<int>(v);
  return true;
}

void print_warnings(const Config& cfg) {
  for (const std::string& w : cfg.load_warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_rates(const std::string& config_path, std::optional<double> distance_km,
              const std::optional<std::string>& scheme_name_arg) {
  Config cfg;
  try {
    cfg = load_config_file(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  print_warnings(cfg);

  Scheme scheme = cfg.chain.scheme;
  if (scheme_name_arg && !scheme_from_name(*scheme_name_arg, &scheme)) {
    std::cerr << "error: unknown scheme '" << *scheme_name_arg << "'\n";
    return kExitConfig;
  }
  const double distance = distance_km.value_or(cfg.chain.total_km);
  if (!(distance > 0)) {
    std::cerr << "error: --distance-km must be positive\n";
    return kExitConfig;
  }

  OptimizationResult opt;
  try {
    opt = optimize_at_distance(distance, scheme, cfg.chain.target_fidelity, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (!opt.feasible) {
    std::cerr << "fidelity target infeasible\n";
    return kExitInfeasible;
  }

  const RateResult& best = opt.best;
  std::string out;
  out += "scheme: " + std::string(scheme_name(scheme)) + "\n";
  out += "distance_km: " + g9(distance) + "\n";
  out += "target_fidelity: " + g9(cfg.chain.target_fidelity) + "\n";
  out += "nesting_s: " + std::to_string(best.chain.nesting_s) + "\n";
  out += "segments: " + std::to_string(1LL << best.chain.nesting_s) + "\n";
  out += "q: " + g9(best.link.q) + "\n";
  out += "rate_hz: " + g9(best.rate_hz) + "\n";
  out += "fidelity: " + g9(best.fidelity) + "\n";
  for (const char* key : {"multiexcitation", "mismatch", "dark_count", "pir_loss"}) {
    auto it = best.error_budget.find(key);
    out += "budget." + std::string(key) + ": " + g9(it == best.error_budget.end() ? 0.0 : it->second) + "\n";
  }
  std::fputs(out.c_str(), stdout);
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, double dmin_km, double dmax_km, int points,
              const std::optional<std::string>& out_path, int thread_cap) {
  Config cfg;
  try {
    cfg = load_config_file(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  print_warnings(cfg);

  const int max_threads = thread_cap > 0 ? thread_cap : cfg.sim.max_threads;
  SweepTable table;
  try {
    table = sweep_distances(dmin_km, dmax_km, points, cfg, max_threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  const std::string csv = to_csv(sweep_to_csv(table));

  if (out_path) {
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write output file: " << *out_path << "\n";
      return kExitConfig;
    }
    out.write(csv.data(), static_cast<std::streamsize>(csv.size()));
    if (!out) {
      std::cerr << "error: cannot write output file: " << *out_path << "\n";
      return kExitConfig;
    }
  } else {
    std::fwrite(csv.data(), 1, csv.size(), stdout);
  }
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, std::optional<long long> segments_arg,
                 std::optional<long long> trials_arg,
                 std::optional<unsigned long long> seed_arg, int thread_cap) {
  Config cfg;
  try {
    cfg = load_config_file(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  print_warnings(cfg);

  if (segments_arg) {
    const long long n = *segments_arg;
    if (n < 1 || (n & (n - 1)) != 0 || n > (1LL << 30)) {
      std::cerr << "error: --segments must be a power of two\n";
      return kExitConfig;
    }
    int s = 0;
    while ((1LL << s) < n) ++s;
    cfg.chain.nesting_s = s;
    cfg.link.l0_km = cfg.chain.total_km / static_cast<double>(n);
  }
  if (trials_arg) {
    if (*trials_arg < 1) {
      std::cerr << "error: --trials must be at least 1\n";
      return kExitConfig;
    }
    cfg.sim.trials = *trials_arg;
  }
  if (seed_arg) cfg.sim.seed = *seed_arg;
  if (thread_cap > 0) cfg.sim.max_threads = thread_cap;

  SchemeModel model;
  RateResult analytic;
  try {
    model = build_scheme_model(cfg.chain, cfg.physical, cfg.link, cfg.rates);
    analytic = analytic_rate(model, cfg.chain);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  SimEstimate est;
  try {
    est = simulate_chain(model, cfg.chain, cfg.sim);
  } catch (const CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSimCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  const double analytic_mean = 1.0 / analytic.rate_hz;
  const bool pass = std::abs(est.mean_time_s - analytic_mean) <= 3.0 * est.std_error_s;

  std::string out;
  out += "scheme: " + std::string(scheme_name(cfg.chain.scheme)) + "\n";
  out += "nesting_s: " + std::to_string(cfg.chain.nesting_s) + "\n";
  out += "segments: " + std::to_string(1LL << cfg.chain.nesting_s) + "\n";
  out += "trials: " + std::to_string(cfg.sim.trials) + "\n";
  out += "seed: " + std::to_string(cfg.sim.seed) + "\n";
  out += "attempt_period_s: " + g9(model.attempt_period) + "\n";
  out += "generation_prob: " + g9(model.generation_prob) + "\n";
  out += "swap_prob: " + g9(model.swap_base_prob * model.connection_efficiency) + "\n";
  out += "mc_mean_time_s: " + g9(est.mean_time_s) + "\n";
  out += "mc_std_error_s: " + g9(est.std_error_s) + "\n";
  out += "mc_rate_hz: " + g9(est.rate_hz) + "\n";
  out += "success_fraction: " + g9(est.success_fraction) + "\n";
  out += "analytic_rate_hz: " + g9(analytic.rate_hz) + "\n";
  out += "ratio_mc_over_analytic: " + g9(est.rate_hz / analytic.rate_hz) + "\n";
  out += "verdict_3se: " + std::string(pass ? "PASS" : "FAIL") + "\n";
  std::fputs(out.c_str(), stdout);
  return kExitOk;
}

struct VerifyCheck {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
};

void push_close(std::vector<VerifyCheck>& checks, const std::string& name,
                double expected, double actual, double tol) {
  checks.push_back(
      VerifyCheck{name, g9(expected), g9(actual), std::abs(actual - expected) <= tol});
}

int cmd_verify() {
  std::vector<VerifyCheck> checks;

  // Exact finite-N connection success against the closed form.
  for (int n = 1; n <= 4; ++n) {
    const Rational actual = brute_force_swap_success(n);
    const Rational expected(2LL * n, 4LL * n - 1);
    checks.push_back(VerifyCheck{"swap success 2N/(4N-1), N=" + std::to_string(n),
                                 expected.str(), actual.str(), actual == expected});
  }

  // Two-link protocol on three bosonic nodes: rotate the shared node, read it
  // out, keep the single-excitation outcomes.
  {
    const StateVector vac = StateVector::vacuum(3, 2);
    const StateVector linked = prepare_link_ideal(
        prepare_link_ideal(vac, 0, 1, Level::Blue), 1, 2, Level::Red);
    const StateVector rotated = swap_rotation(linked, 1);
    const auto outcomes = fluorescent_measure(rotated, 1, 1.0, 0.0);

    double single_prob = 0.0;
    double completeness = 0.0;
    double worst_fidelity = 1.0;
    const StateVector target = create_spin_wave(vac, 0, Level::Blue)
                                   .added(create_spin_wave(vac, 2, Level::Red))
                                   .normalized();
    for (const auto& o : outcomes) {
      completeness += o.probability;
      if (o.label.true_blue + o.label.true_red != 1) continue;
      single_prob += o.probability;
      StateVector post = o.post_state;
      if (o.label.phase_flip) post = apply_level_phase(post, 0, Level::Blue);
      worst_fidelity = std::min(worst_fidelity, fidelity(post, target));
    }
    push_close(checks, "swap success (bosonic)", 0.5, single_prob, 1e-12);
    push_close(checks, "post-connection fidelity (phase corrected)", 1.0, worst_fidelity,
               1e-12);
    push_close(checks, "readout completeness", 1.0, completeness, 1e-12);
    push_close(checks, "rotation involution", 1.0,
               fidelity(swap_rotation(rotated, 1), linked), 1e-12);
  }

  // Interruption window and loss-target algebra at the standard operating
  // point eta = 0.05, d = 100.
  {
    PhysicalParams p;
    p.gamma = 1.0e7;
    p.delta = 1.0e12;
    p.beta = 0.5;
    p.omega_p = 1.0e6;
    p.omega_c = 2.0e7;
    p.length_l = 1.0e-3;
    p.depth_d = 100.0;
    p.eta = 0.05;
    p.n_atoms = 2000;
    const PirResult window = pir_window(p, 10.0);
    push_close(checks, "window ratio t_max/t_min", p.depth_d, window.t_max / window.t_min,
               1e-12 * p.depth_d);
    const double delta = pir_cost_for_target(p.eta, p.depth_d);
    push_close(checks, "suppression at loss target", p.eta * (2.0 - p.eta),
               pir_suppression(p.eta, delta, p.depth_d), 1e-12);

    LinkParams link;
    link.l0_km = 10.0;
    link.latt_km = 20.0;
    link.q = 0.01;
    link.eta_d = 0.5;
    link.eta_f = 0.95;
    link.n_photons = 20;
    const double direct = dark_count_expectation(p, link);
    const double composed = static_cast<double>(link.n_photons) *
                            leak_rate(p.gamma, p.omega_p, p.beta, p.delta) *
                            static_cast<double>(p.n_atoms) /
                            (p.eta * link.eta_d * fluorescence_rate(p.gamma, p.omega_p));
    push_close(checks, "dark-count identity", composed, direct, 1e-12 * composed);
  }

  // Waiting-time oracle: two links at p0 = 1/2 feeding a coin-flip
  // connection; the chain solve must give 16/3 rounds.
  push_close(checks, "two-link expected rounds (p0=0.5, p_swap=0.5)", 16.0 / 3.0,
             exact_two_link_expectation(0.5, 0.5, 1.0), 1e-12 * (16.0 / 3.0));

  std::string out;
  const VerifyCheck* first_fail = nullptr;
  for (const auto& c : checks) {
    out += c.name + ": expected " + c.expected + ", actual " + c.actual + " -> " +
           (c.pass ? "PASS" : "FAIL") + "\n";
    if (!c.pass && !first_fail) first_fail = &c;
  }
  std::fputs(out.c_str(), stdout);
  if (first_fail) {
    std::cerr << "verification failed: " << first_fail->name << "\n";
    return kExitVerify;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
  int thread_cap = 0;
  std::string env_error;
  if (!thread_cap_from_env(&thread_cap, &env_error)) {
    std::cerr << "error: " << env_error << "\n";
    return kExitConfig;
  }

  CLI::App app{"atomic-ensemble repeater rate and protocol toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<double> distance_km;
  std::optional<std::string> scheme_arg;
  CLI::App* rates = app.add_subcommand("rates", "optimized rate and error budget at one distance");
  rates->add_option("config", config_path, "configuration file")->required();
  rates->add_option("--distance-km", distance_km, "total distance (default: chain.total_km)");
  rates->add_option("--scheme", scheme_arg, "scheme override (default: chain.scheme)");

  double dmin_km = 0.0, dmax_km = 0.0;
  int points = 0;
  std::optional<std::string> out_path;
  CLI::App* sweep = app.add_subcommand("sweep", "optimized rates over a log-spaced distance grid, as CSV");
  sweep->add_option("config", config_path, "configuration file")->required();
  sweep->add_option("--dmin-km", dmin_km, "smallest distance")->required();
  sweep->add_option("--dmax-km", dmax_km, "largest distance")->required();
  sweep->add_option("--points", points, "number of grid points")->required();
  sweep->add_option("--out", out_path, "output file (default: stdout)");

  std::optional<long long> segments;
  std::optional<long long> trials;
  std::optional<unsigned long long> seed;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo waiting time vs the analytic rate");
  simulate->add_option("config", config_path, "configuration file")->required();
  simulate->add_option("--segments", segments, "elementary segments, a power of two");
  simulate->add_option("--trials", trials, "Monte Carlo trials");
  simulate->add_option("--seed", seed, "RNG seed");

  CLI::App* verify = app.add_subcommand("verify", "self-contained protocol correctness checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // help output
    app.exit(e);
    return kExitConfig;
  }

  if (rates->parsed()) return cmd_rates(config_path, distance_km, scheme_arg);
  if (sweep->parsed()) return cmd_sweep(config_path, dmin_km, dmax_km, points, out_path, thread_cap);
  if (simulate->parsed()) return cmd_simulate(config_path, segments, trials, seed, thread_cap);
  if (verify->parsed()) return cmd_verify();
  return kExitConfig;
}

}  // namespace fluorep
