#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace poca {

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Folds (base, parts...) into one stream key. Every component that needs
// randomness derives its own key this way; streams are never shared, so
// runs stay reproducible regardless of thread count.
inline std::uint64_t derive_key(std::uint64_t base,
                                std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t k = mix64(base);
  for (std::uint64_t p : parts) k = mix64(k ^ mix64(p));
  return k;
}

// Maps a 64-bit word to [0, 1).
inline double to_unit(std::uint64_t u) noexcept {
  return static_cast<double>(u >> 11) * 0x1.0p-53;
}

// Seeded random stream with explicit distributions. The standard-library
// distribution objects are implementation-defined, so uniform and normal
// draws are generated directly from the raw engine output to keep run
// logs byte-identical across toolchains.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : engine_(key) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform01() { return to_unit(next_u64()); }

  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, span); span >= 1.
  std::uint64_t bounded(std::uint64_t span) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % span;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % span;
  }

  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(bounded(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Box-Muller, cosine branch only.
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * kPi * u2);
  }

 private:
  static constexpr double kPi = 3.14159265358979323846264338327950288;
  std::mt19937_64 engine_;
};

}  // namespace poca
