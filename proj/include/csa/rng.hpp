#pragma once

#include <cmath>
#include <cstdint>

namespace csa {

// xoshiro256++ with splitmix64 state initialization. All draws go through
// explicit transforms (53-bit uniform, threshold Bernoulli, inverse-CDF
// exponential) so the stream is fully pinned by this file and not by
// library-specific distribution internals.
inline constexpr const char* kRngAlgorithm = "xoshiro256++/splitmix64/inverse-cdf";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) {
      x += 0x9E3779B97F4A7C15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      s = z ^ (z >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // uniform in [0, 1), 53 significant bits
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return u01() < p; }

  // unit-mean exponential via inverse CDF
  double exp_unit() { return -std::log1p(-u01()); }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
  std::uint64_t state_[4];
};

}  // namespace csa
