#include "fluorep/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "fluorep/rng.hpp"

namespace fluorep {

namespace {

struct TrialContext {
  Xoshiro256pp rng;
  long long attempts = 0;
  long long cap = 0;
};

// Completion round of one level-k link whose regeneration starts at `start`.
// A connection fires in the round its later half completes; on failure both
// halves restart from that round.
long long link_completion_round(int level, long long start, double p0, double p_swap,
                                TrialContext& ctx) {
  if (level == 0) {
    const long long attempts = sample_geometric(ctx.rng, p0);
    ctx.attempts += attempts;
    if (ctx.attempts > ctx.cap)
      throw CapExceededError("simulate_chain: a trial exceeded max_attempt_cap");
    return start + attempts;
  }
  for (;;) {
    const long long a = link_completion_round(level - 1, start, p0, p_swap, ctx);
    const long long b = link_completion_round(level - 1, start, p0, p_swap, ctx);
    const long long ready = std::max(a, b);
    if (ctx.rng.bernoulli(p_swap)) return ready;
    start = ready;
  }
}

// Order-insensitive pairwise reduction; the tree shape depends only on the
// index range, never on the thread layout.
double pairwise_sum(const std::vector<double>& values, std::size_t begin, std::size_t end) {
  const std::size_t count = end - begin;
  if (count == 0) return 0.0;
  if (count == 1) return values[begin];
  if (count == 2) return values[begin] + values[begin + 1];
  const std::size_t mid = begin + count / 2;
  return pairwise_sum(values, begin, mid) + pairwise_sum(values, mid, end);
}

}  // namespace

SimEstimate simulate_chain(const SchemeModel& model, const ChainConfig& chain,
                           const SimConfig& sim) {
  if (sim.trials < 1) throw std::invalid_argument("simulate_chain: trials must be >= 1");
  if (sim.max_attempt_cap < 1)
    throw std::invalid_argument("simulate_chain: max_attempt_cap must be >= 1");
  if (chain.nesting_s < 0 || chain.nesting_s > 30)
    throw std::invalid_argument("simulate_chain: nesting_s out of range");
  if (!(model.generation_prob > 0))
    throw std::domain_error("simulate_chain: generation probability is zero");
  if (!(model.attempt_period > 0))
    throw std::domain_error("simulate_chain: attempt_period must be positive");
  const double p0 = std::min(1.0, model.generation_prob);
  const double p_swap = std::min(1.0, model.swap_base_prob * model.connection_efficiency);
  if (chain.nesting_s > 0 && !(p_swap > 0))
    throw std::domain_error("simulate_chain: swap probability is zero");

  const std::size_t trials = static_cast<std::size_t>(sim.trials);
  std::vector<double> rounds(trials, 0.0);

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  std::size_t workers = sim.max_threads > 0 ? static_cast<std::size_t>(sim.max_threads) : hw;
  workers = std::max<std::size_t>(1, std::min(workers, trials));

  std::atomic<bool> cap_exceeded{false};
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      TrialContext ctx{trial_stream(sim.seed, static_cast<std::uint64_t>(i)), 0,
                       sim.max_attempt_cap};
      try {
        rounds[i] = static_cast<double>(
            link_completion_round(chain.nesting_s, 0, p0, p_swap, ctx));
      } catch (const CapExceededError&) {
        cap_exceeded.store(true);
        return;
      }
    }
  };

  if (workers == 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> threads;
    const std::size_t chunk = (trials + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(trials, begin + chunk);
      if (begin >= end) break;
      threads.emplace_back(run_range, begin, end);
    }
    for (auto& t : threads) t.join();
  }
  if (cap_exceeded.load())
    throw CapExceededError("simulate_chain: a trial exceeded max_attempt_cap");

  const double n = static_cast<double>(trials);
  const double mean_rounds = pairwise_sum(rounds, 0, trials) / n;
  double se_rounds = 0.0;
  if (trials > 1) {
    std::vector<double> sq(trials);
    for (std::size_t i = 0; i < trials; ++i) {
      const double d = rounds[i] - mean_rounds;
      sq[i] = d * d;
    }
    const double var = pairwise_sum(sq, 0, trials) / (n - 1.0);
    se_rounds = std::sqrt(var / n);
  }

  SimEstimate est;
  est.mean_time_s = mean_rounds * model.attempt_period;
  est.std_error_s = se_rounds * model.attempt_period;
  est.rate_hz = 1.0 / est.mean_time_s;
  est.success_fraction = 1.0;
  return est;
}

double exact_two_link_expectation(double p0, double p_swap, double attempt_period) {
  if (!(p0 > 0 && p0 <= 1))
    throw std::domain_error("exact_two_link_expectation: p0 must be in (0,1]");
  if (!(p_swap > 0 && p_swap <= 1))
    throw std::domain_error("exact_two_link_expectation: p_swap must be in (0,1]");
  if (!(attempt_period > 0))
    throw std::domain_error("exact_two_link_expectation: attempt_period must be positive");

  // States: E00 (both links pending), E10 (one link ready). Per round each
  // pending link succeeds with p0; when the pair is complete the connection
  // is attempted in that same round and a failure restarts both links.
  //   E10 = 1 + p0 (1-p_swap) E00 + (1-p0) E10
  //   E00 = 1 + p0^2 (1-p_swap) E00 + 2 p0 (1-p0) E10 + (1-p0)^2 E00
  // Eliminating E10 gives a single linear equation in E00.
  const double q0 = 1.0 - p0;
  const double fail = 1.0 - p_swap;
  // E10 = 1/p0 + fail * E00
  const double rhs = 1.0 + 2.0 * p0 * q0 * (1.0 / p0);
  const double coeff = 1.0 - p0 * p0 * fail - q0 * q0 - 2.0 * p0 * q0 * fail;
  const double e00 = rhs / coeff;
  return attempt_period * e00;
}

}  // namespace fluorep
