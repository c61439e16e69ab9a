#include "weil/primes.hpp"

#include <array>

#include "weil/errors.hpp"

namespace weil {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::array<std::uint64_t, 12> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kWitnesses) {
    if (n % p == 0) return n == p;
  }
  if (n < 37 * 37) return true;

  // The first twelve primes as witnesses are exact below 3.3e24.
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kWitnesses) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t nearest_prime(std::uint64_t target) {
  if (target < 2) throw InvalidArgument("nearest_prime: target must be >= 2");
  for (std::uint64_t delta = 0;; ++delta) {
    if (target + delta >= target && is_prime(target + delta)) return target + delta;
    if (delta <= target && is_prime(target - delta)) return target - delta;
  }
}

std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  for (std::uint64_t p = n;; ++p) {
    if (p < n) throw InvalidArgument("next_prime: no 64-bit prime above input");
    if (is_prime(p)) return p;
  }
}

}  // namespace weil
