#pragma once

#include <stdexcept>

#include "fluorep/config.hpp"
#include "fluorep/rates.hpp"

namespace fluorep {

class CapExceededError : public std::runtime_error {
 public:
  explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

// Monte Carlo estimate of the full-chain completion time. success_fraction
// is 1 for any returned estimate: a trial that exceeds max_attempt_cap
// aborts the whole run with CapExceededError instead of being dropped.
struct SimEstimate {
  double mean_time_s = 0.0;
  double std_error_s = 0.0;
  double rate_hz = 0.0; // 1 / mean_time_s
  double success_fraction = 1.0;
};

// Samples the waiting time of the doubling protocol. Every elementary link
// draws geometric(generation_prob) attempts; a level-k connection fires at
// the later of its two halves and succeeds with probability
// swap_base_prob * connection_efficiency; on failure both halves are
// destroyed and regenerate from the failure time. Trial i uses the stream
// derived from (seed, i), and aggregation is pairwise over the trial index,
// so results are bit-identical for any thread count.
SimEstimate simulate_chain(const SchemeModel& model, const ChainConfig& chain,
                           const SimConfig& sim);

// Exact expected completion time of one connection fed by two links
// (nesting level 1), from the absorbing Markov chain over link-ready states
// solved as a linear system. Equals
// attempt_period * (2/p0 - 1/(1 - (1-p0)^2)) / p_swap.
double exact_two_link_expectation(double p0, double p_swap, double attempt_period);

}  // namespace fluorep
