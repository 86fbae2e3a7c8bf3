#pragma once

#include <cmath>
#include <cstdint>

namespace fcsp {

// Seedable, portable generator: xoshiro256** seeded through splitmix64.
// std::mt19937 would be portable too, but the standard distributions are not;
// all sampling below is spelled out so instances reproduce across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  // Independent stream derived from a base seed and a stream index.
  static Rng stream(uint64_t seed, uint64_t index) {
    uint64_t x = seed;
    uint64_t a = splitmix64(x);
    uint64_t mixed = a ^ (index * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull);
    return Rng(splitmix64(mixed) ^ mixed);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n) by rejection; n >= 1.
  uint32_t next_below(uint32_t n) {
    const uint64_t span = n;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return static_cast<uint32_t>(x % span);
  }

  bool next_bernoulli(double p) { return next_double() < p; }

  // Exp(1) sample, used for Dirichlet(1) rows.
  double next_exponential() {
    double u = next_double();
    while (u <= 0.0) u = next_double();
    return -std::log(u);
  }

 private:
  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t state_[4];
};

}  // namespace fcsp
