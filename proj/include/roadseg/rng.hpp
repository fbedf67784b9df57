#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace roadseg {

// Deterministic random helpers on top of std::mt19937. The standard
// distributions are implementation-defined, so everything that must be
// reproducible across toolchains is derived from raw engine output here.
class Rng {
 public:
  explicit Rng(std::uint32_t seed) : engine_(seed) {}

  std::uint32_t next_u32() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return (static_cast<std::uint64_t>(next_u32()) << 21 | (next_u32() >> 11)) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint32_t uniform_index(std::uint32_t n) {
    // Rejection sampling keeps the draw unbiased and deterministic.
    const std::uint32_t limit = UINT32_MAX - UINT32_MAX % n;
    std::uint32_t v;
    do {
      v = next_u32();
    } while (v >= limit);
    return v % n;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(static_cast<std::uint32_t>(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derives a stream seed from a base seed, keeping independent consumers
/// (per image, per iteration) decorrelated but reproducible.
inline std::uint32_t derive_seed(std::uint32_t base, std::uint32_t stream) {
  std::uint64_t z = (static_cast<std::uint64_t>(base) << 32) ^ (0x9e3779b97f4a7c15ull * (stream + 1));
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return static_cast<std::uint32_t>(z);
}

}  // namespace roadseg
