#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cosetqkd {

// Deterministic stream derivation. Every randomized routine takes an explicit
// 64-bit seed and derives independent substreams as derive_seed(seed, tag, index),
// so per-trial / per-mode work can run in any order and still reproduce
// byte-identical results.
uint64_t splitmix64(uint64_t x);
uint64_t derive_seed(uint64_t seed, uint64_t tag, uint64_t index = 0);

// mt19937_64 is bit-exact across standard library implementations; the
// distributions below avoid std::*_distribution, whose outputs are not.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(splitmix64(seed ^ 0x9e3779b97f4a7c15ull)) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform();

    // Uniform in {0, ..., bound-1} via rejection (no modulo bias).
    uint64_t uniform_below(uint64_t bound);

    // Standard normal via Box-Muller. Draws two uniforms per call and discards
    // the second variate so that consecutive calls never share state.
    double gaussian();

    // Sorted k-subset of {0, ..., n-1} without replacement.
    std::vector<int> sample_subset(int n, int k);

  private:
    std::mt19937_64 engine_;
};

}  // namespace cosetqkd
