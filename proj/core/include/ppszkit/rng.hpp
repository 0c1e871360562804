#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ppszkit {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Deterministic RNG. The engine is std::mt19937_64 (bit-exact across
/// implementations); bounded sampling and shuffling are done here so results
/// do not depend on the standard library's distribution algorithms.
/// Independent streams are derived from (seed, stream index), which makes
/// parallel trials reproducible and order-independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

  static Rng forStream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix64(seed + 0x9e3779b97f4a7c15ull * (stream + 1)));
  }

  std::uint64_t next() { return eng_(); }

  bool coin() { return (next() & 1ull) != 0; }

  /// Uniform in [0, bound); unbiased via rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  double unit() { return (next() >> 11) * 0x1.0p-53; }

  /// Fisher-Yates over the given order.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ppszkit
