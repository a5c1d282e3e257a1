#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fogsim {

// One-shot 64-bit mix (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

// FNV-1a over a byte string; used to turn stream tags into seed material.
std::uint64_t fnv1a64(std::string_view s);

// Child-seed derivation: every random stream in the project is derived from
// a root seed, a component tag, and an index.  Documented in the README so a
// single number reproduces an entire experiment.
//
//   derive_seed(root, tag, k) = mix64(mix64(root ^ fnv1a64(tag)) + k * 0x9E3779B97F4A7C15)
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                          std::uint64_t index = 0);

// Seeded random stream.  The engine is std::mt19937_64 but every variate is
// generated from raw 64-bit outputs by code in this class, so sequences are
// identical across standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).  n must be >= 1.
  int uniform_int(int n);

  // Poisson draw via Knuth's product-of-uniforms method.  Intended for the
  // modest rates used here (lambda up to a few tens).
  int poisson(double lambda);

 private:
  std::mt19937_64 engine_;
};

}  // namespace fogsim
