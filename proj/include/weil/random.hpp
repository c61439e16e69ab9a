#pragma once

#include <cstdint>
#include <random>

namespace weil {

/// Portable seeded stream of doubles in [0, 1).
///
/// Engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Each draw keeps the top 53 bits of one engine output and scales
/// by 2^-53, so a given seed yields bit-identical samples on every conforming
/// platform (std::uniform_real_distribution is implementation-defined and is
/// deliberately not used).
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; used to derive independent per-cell seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return mix_seed(mix_seed(mix_seed(base) ^ a) ^ b);
}

}  // namespace weil
