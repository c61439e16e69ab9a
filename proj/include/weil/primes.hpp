#pragma once

#include <cstdint>

namespace weil {

__extension__ using uint128 = unsigned __int128;

/// (a * b) mod m without overflow, for any 64-bit modulus.
constexpr std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<uint128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Deterministic primality test, exact for every 64-bit input (trial
/// division for small n, fixed-witness Miller-Rabin otherwise).
bool is_prime(std::uint64_t n);

/// Prime minimising |p - target|; ties go to the larger prime.
std::uint64_t nearest_prime(std::uint64_t target);

/// Smallest prime >= n.
std::uint64_t next_prime(std::uint64_t n);

}  // namespace weil
