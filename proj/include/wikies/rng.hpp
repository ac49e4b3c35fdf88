#pragma once

#include <cassert>
#include <cstdint>
#include <random>

namespace wikies {

// Deterministic random source. std::mt19937_64 has a fully specified output
// sequence; the standard distributions do not, so the draw helpers here are
// explicit and the results reproduce bit-for-bit for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream derived from a master seed. Streams for distinct ids
  // are decorrelated by a splitmix64 scramble.
  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::uint64_t x = master_seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1);
    return Rng(splitmix64(x));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, bound) by rejection, so every value is equally
  // likely regardless of bound.
  std::uint64_t below(std::uint64_t bound) {
    assert(bound > 0);
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  std::size_t index(std::size_t size) { return static_cast<std::size_t>(below(size)); }

  // Uniform double in [0, 1) with 53 bits of precision.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool coin() { return (next_u64() & 1u) != 0; }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace wikies
