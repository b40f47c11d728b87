#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace srp {

// splitmix64; used to expand user seeds into substream states.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256** with fully specified behavior so that seeded runs are
// reproducible across compilers and standard libraries.  Substreams are
// derived from (seed, stream) pairs, which keeps parallel and serial
// execution orders bit-identical.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t sm = seed ^ (0x6a09e667f3bcc909ULL + stream * 0x3c6ef372fe94f82bULL);
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n) by rejection; n must be positive.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

// Draws `n` categorical samples with the given probability weights and
// accumulates counts. Weights need not be normalized; all must be >= 0.
inline void multinomial_counts(Rng& rng, long n, const Eigen::VectorXd& weights,
                               Eigen::VectorXi& counts) {
  const int k = static_cast<int>(weights.size());
  counts.setZero(k);
  const double total = weights.sum();
  for (long draw = 0; draw < n; ++draw) {
    double u = rng.uniform01() * total;
    int idx = k - 1;
    for (int i = 0; i < k; ++i) {
      u -= weights[i];
      if (u < 0) {
        idx = i;
        break;
      }
    }
    ++counts[idx];
  }
}

}  // namespace srp
