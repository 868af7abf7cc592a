#pragma once

#include <cmath>
#include <cstdint>

namespace fluorep {

// SplitMix64: key expansion for seeding. Weyl sequence + finalizer.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t s) : state(s) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

// xoshiro256++ with integer-only state transitions, so identical streams on
// every platform.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in (0, 1]: 53 mantissa bits, never 0 so log() is safe.
  double uniform01() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() <= p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Independent per-trial stream derived from (seed, trial_index). Determinism
// under any trial-to-thread assignment follows from indexing alone.
inline Xoshiro256pp trial_stream(std::uint64_t seed, std::uint64_t trial_index) {
  SplitMix64 sm(seed ^ (0x9e3779b97f4a7c15ULL * (trial_index + 1)));
  std::uint64_t derived = sm.next() ^ trial_index;
  return Xoshiro256pp(derived);
}

// Number of Bernoulli(p) attempts up to and including the first success,
// p in (0, 1]. Inversion method: one uniform per draw.
inline long long sample_geometric(Xoshiro256pp& rng, double p) {
  if (p >= 1.0) return 1;
  double u = rng.uniform01();
  double k = std::floor(std::log(u) / std::log1p(-p));
  if (k < 0) k = 0;
  if (k > 4.0e18) k = 4.0e18;
  return 1 + static_cast<long long>(k);
}

}  // namespace fluorep
