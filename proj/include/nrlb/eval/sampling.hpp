#pragma once

#include <cstdint>
#include <vector>

#include "nrlb/core/error.hpp"

namespace nrlb::eval {

/// splitmix64; expands one seed word into the xoshiro state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** (Blackman/Vigna). Pinned so that seeded samples are
/// bit-identical across platforms and standard-library versions.
class Xoshiro256ss {
public:
  explicit Xoshiro256ss(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Unbiased uniform draw in [0, bound) via rejection.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw;
    do {
      draw = next();
    } while (draw >= limit);
    return draw % bound;
  }

private:
  std::uint64_t state_[4] = {};
};

/// Uniform sample of n records without replacement: partial Fisher-Yates
/// over a copy of the input, driven by the pinned generator. A pure function
/// of (record order, n, seed).
template <typename T>
std::vector<T> sample(const std::vector<T>& records, std::size_t n, std::uint64_t seed) {
  if (n > records.size()) {
    throw Error("sample size " + std::to_string(n) + " exceeds corpus size " +
                std::to_string(records.size()));
  }
  std::vector<T> pool = records;
  Xoshiro256ss rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return pool;
}

}  // namespace nrlb::eval
