#include "fogsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fogsim {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x00000100000001B3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                          std::uint64_t index) {
  return mix64(mix64(root ^ fnv1a64(tag)) + index * 0x9E3779B97F4A7C15ULL);
}

int RngStream::uniform_int(int n) {
  if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<int>(x % bound);
}

int RngStream::poisson(double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("poisson: negative rate");
  if (lambda == 0.0) return 0;
  const double threshold = std::exp(-lambda);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform01();
  } while (p > threshold);
  return k - 1;
}

}  // namespace fogsim
