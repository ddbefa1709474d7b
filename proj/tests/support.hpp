#pragma once

// Generators and brute-force oracles shared by the test suites. Nothing here
// calls into the code under test beyond constructing inputs.

#include <cstdint>
#include <random>
#include <vector>

#include "pqs/bigint.hpp"

namespace pqs::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(0x5eed1234abcdULL);
  return engine;
}

inline std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng());
}

inline BigInt random_bigint(int decimal_digits) {
  BigInt x = 0;
  for (int i = 0; i < decimal_digits; ++i) x = x * 10 + uniform(0, 9);
  return uniform(0, 1) ? x : BigInt(-x);
}

/// Nonzero rational with a planted power of p so valuations spread out.
inline BigRational random_rational(std::uint64_t p, int max_shift = 6) {
  BigInt num = 0, den = 0;
  while (num == 0) num = random_bigint(static_cast<int>(uniform(1, 12)));
  while (den == 0) den = random_bigint(static_cast<int>(uniform(1, 8)));
  const std::int64_t shift = uniform(-max_shift, max_shift);
  BigInt pk = 1;
  for (std::int64_t i = 0; i < (shift < 0 ? -shift : shift); ++i) pk *= p;
  return shift >= 0 ? make_rational(num * pk, den) : make_rational(num, den * pk);
}

/// nu_p by repeated exact division, independent of split_prime_power.
inline std::int64_t naive_valuation(BigInt n, std::uint64_t p) {
  std::int64_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

/// Modular inverse by exhaustive search (small moduli only).
inline std::int64_t brute_inverse(std::int64_t a, std::int64_t m) {
  a = ((a % m) + m) % m;
  for (std::int64_t u = 1; u < m; ++u) {
    if ((a * u) % m == 1) return u;
  }
  return -1;
}

inline BigInt brute_pow(BigInt b, std::uint64_t e) {
  BigInt r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r *= b;
  return r;
}

inline BigInt brute_mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  return r < 0 ? BigInt(r + m) : r;
}

/// Inverse mod p^k by Euler's theorem, a^(phi(p^k) - 1); independent of
/// the extended Euclidean route used by the library.
inline BigInt euler_inverse(const BigInt& a, std::uint64_t p, std::uint64_t k) {
  const BigInt m = brute_pow(BigInt(p), k);
  const BigInt phi = brute_pow(BigInt(p), k - 1) * (p - 1);
  return boost::multiprecision::powm(brute_mod(a, m), phi - 1, m);
}

/// Unit part of a nonzero rational modulo p^k.
inline BigInt unit_part_mod(const BigRational& r, std::uint64_t p, std::uint64_t k) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  while (num % p == 0) num /= p;
  while (den % p == 0) den /= p;
  const BigInt m = brute_pow(BigInt(p), k);
  return brute_mod(num * euler_inverse(den, p, k), m);
}

}  // namespace pqs::testing
