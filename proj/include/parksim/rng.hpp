#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace parksim {

// Deterministic random source used for every draw in the project. Wraps
// std::mt19937_64 but converts to doubles explicitly, so sequences do not
// depend on libstdc++'s distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Exponential with the given rate (mean 1/rate). rate must be > 0.
  double exponential(double rate);

  // Smallest-integer inversion-free Poisson sampler (product of uniforms).
  int poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

// 64-bit FNV-1a over the bytes of s.
std::uint64_t hash64(std::string_view s);

// Counter-style stream derivation: fold stream labels into a master seed so
// sibling streams are independent of each other and of listing order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c);

}  // namespace parksim
