#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fluorep/model.hpp"

namespace fluorep {

// Tunable constants of the rate and fidelity model that are not fixed by the
// physics inputs.
struct RatesKnobs {
  double kappa_m = 1.0;   // prefactor of the multiexcitation budget term
  double ref_c_r = 1.0;   // reference-scheme retrieval loss constant (c_r / sqrt(d))
  double ref_eta_d = 0.4; // reference-scheme connection detector efficiency
};

struct OptimizerKnobs {
  int s_max = 10;              // largest nesting level searched
  bool co_optimize_pir = false; // also scan the interrupted-retrieval duration
};

// Monte Carlo controls. max_threads = 0 means use the hardware default; the
// CLI caps it with the REPEATER_THREADS environment variable. Results are
// independent of the thread count by construction.
struct SimConfig {
  long long trials = 10000;
  unsigned long long seed = 12345;
  long long max_attempt_cap = 100000000; // elementary generation attempts per trial
  int max_threads = 0;
};

struct Config {
  FrequencyUnits units = FrequencyUnits::HzOver2Pi;
  PhysicalParams physical;
  LinkParams link;
  ChainConfig chain;
  RatesKnobs rates;
  OptimizerKnobs optimizer;
  SimConfig sim;
  std::vector<std::string> load_warnings; // regime warnings from validate()
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Parses the flat key-value format:
//
//   # comment
//   physical.gamma = 6.0e6
//   chain.scheme   = NewSingleRail
//
// Dotted keys select sections; '#' starts a comment; blank lines are ignored.
// Unknown or duplicate keys are errors with line context, as are missing
// required keys. link.l0_km may be omitted, in which case it is derived as
// chain.total_km / 2^chain.nesting_s. After parsing, validate() runs; hard
// errors raise ConfigError, warnings are collected on the returned Config.
Config load_config(const std::string& text);
Config load_config_file(const std::string& path);

// Canonical serialization. Frequencies are written in rad/s (units.frequencies
// = rad_per_s) with 17 significant digits so that a load of the output
// reproduces every double bit-exactly.
std::string serialize_config(const Config& cfg);

}  // namespace fluorep
