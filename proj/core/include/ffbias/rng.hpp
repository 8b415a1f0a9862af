#ifndef FFBIAS_RNG_HPP
#define FFBIAS_RNG_HPP

#include <cstdint>

namespace ffbias {

// splitmix64.  Hand-rolled so that seeded runs are bit-identical across
// platforms and standard-library versions; std::uniform_int_distribution
// gives no such guarantee.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Unbiased draw from [0, n) by rejection.
  std::uint64_t next_below(std::uint64_t n) {
    for (;;) {
      std::uint64_t x = next();
      std::uint64_t r = x % n;
      if (x - r <= ~std::uint64_t{0} - (n - 1)) return r;
    }
  }

 private:
  std::uint64_t state_;
};

// Deterministic seed derivation for sub-streams (row i of an ensemble,
// attempt k of a search, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  SplitMix64 rng(seed ^ (0x9e3779b97f4a7c15ull + salt * 0xc2b2ae3d27d4eb4full));
  return rng.next();
}

}  // namespace ffbias

#endif
