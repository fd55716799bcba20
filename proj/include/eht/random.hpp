#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace eht {

// splitmix64 step; used to derive decorrelated child seeds from a root seed
// so independent work units (records, restarts, scan cells) can be generated
// in any order, or in parallel, without changing their output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic seed tree. child(label) depends only on (seed, label), so a
// stream can be re-created anywhere from the root seed.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t root() const { return seed_; }

  std::uint64_t child(std::uint64_t label) const {
    std::uint64_t s = seed_ ^ (0x6a09e667f3bcc909ull + label * 0x9e3779b97f4a7c15ull);
    return splitmix64(s);
  }

  SeedStream substream(std::uint64_t label) const {
    return SeedStream(child(label));
  }

  // mt19937_64 is fully specified by the standard, so sequences are identical
  // across platforms and library versions.
  std::mt19937_64 engine(std::uint64_t label) const {
    return std::mt19937_64(child(label));
  }

 private:
  std::uint64_t seed_;
};

// Uniform double in [0, 1) built from the top 53 bits of the engine output.
// std::uniform_real_distribution is not pinned down by the standard; this is.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Marsaglia polar method on top of uniform01; deterministic given the engine.
inline double standard_normal(std::mt19937_64& rng) {
  while (true) {
    double u = 2.0 * uniform01(rng) - 1.0;
    double v = 2.0 * uniform01(rng) - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

}  // namespace eht
