#pragma once

#include <algorithm>
#include <cstdint>
#include <string_view>
#include <vector>

namespace gonsel {

// Deterministic RNG with a fixed algorithm. The standard library engines and
// distributions are implementation-defined, which would break byte-identical
// outputs across toolchains; everything random in this project flows through
// this header instead.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// xoshiro256** seeded via splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next() {
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

  /// Unbiased draw from [0, bound) by rejection; bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

/// Stream key for per-term work: independent of execution order, so parallel
/// runs reproduce serial ones.
inline Rng derive_rng(std::uint64_t seed, std::string_view key,
                      std::uint64_t lane = 0) {
  std::uint64_t s = seed ^ (0x632be59bd9b4e019ull * (lane + 1));
  s ^= fnv1a64(key);
  return Rng(splitmix64(s));
}

/// In-place Fisher-Yates.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = std::size_t(rng.uniform_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

/// First `count` elements of a shuffle of `items` (order significant).
/// Sampling the prefix keeps draws for nested budgets consistent.
template <typename T>
std::vector<T> sample_prefix(std::vector<T> items, std::size_t count,
                             Rng& rng) {
  shuffle(items, rng);
  if (count < items.size()) items.resize(count);
  return items;
}

}  // namespace gonsel
