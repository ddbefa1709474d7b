#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "pqs/error.hpp"

namespace pqs {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

/// A validated prime 2 <= p < 2^32.
class Prime {
 public:
  explicit Prime(std::uint64_t value) : value_(static_cast<std::uint32_t>(value)) {
    if (value >= (std::uint64_t{1} << 32)) {
      throw DomainError("prime " + std::to_string(value) + " is too large (must be < 2^32)");
    }
    if (!is_prime(value)) {
      throw DomainError(std::to_string(value) + " is not prime");
    }
  }

  std::uint64_t value() const noexcept { return value_; }
  BigInt big() const { return BigInt(value_); }
  bool is_two() const noexcept { return value_ == 2; }

  friend bool operator==(Prime, Prime) = default;

 private:
  std::uint32_t value_;
};

inline BigInt ipow(const BigInt& base, std::uint64_t exponent) {
  BigInt result = 1;
  BigInt b = base;
  while (exponent != 0) {
    if (exponent & 1u) result *= b;
    exponent >>= 1;
    if (exponent != 0) b *= b;
  }
  return result;
}

inline BigInt prime_power(Prime p, std::int64_t exponent) {
  if (exponent < 0) throw InternalError("negative exponent in prime_power");
  return ipow(p.big(), static_cast<std::uint64_t>(exponent));
}

/// Least non-negative residue of a modulo m (m > 0).
inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

/// Inverse of a modulo m by the extended Euclidean algorithm.
inline BigInt inverse_mod(const BigInt& a, const BigInt& m) {
  BigInt old_r = mod_floor(a, m), r = m;
  BigInt old_s = 1, s = 0;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt t = old_r - q * r;
    old_r = std::move(r);
    r = std::move(t);
    t = old_s - q * s;
    old_s = std::move(s);
    s = std::move(t);
  }
  if (old_r != 1) throw DomainError("element is not invertible modulo " + m.str());
  return mod_floor(old_s, m);
}

/// Splits a nonzero integer as p^v * rest with p not dividing rest.
inline std::pair<std::int64_t, BigInt> split_prime_power(BigInt a, Prime p) {
  if (a == 0) throw InternalError("split_prime_power of zero");
  const BigInt pb = p.big();
  std::int64_t v = 0;
  BigInt q, r;
  for (;;) {
    boost::multiprecision::divide_qr(a, pb, q, r);
    if (r != 0) break;
    a.swap(q);
    ++v;
  }
  return {v, std::move(a)};
}

inline BigInt gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }

inline BigInt abs(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

/// Decimal integer with optional leading sign. Rejects anything else
/// (cpp_int's own parser would also accept hex and octal prefixes).
inline bool is_decimal_integer(std::string_view text) {
  std::size_t i = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) i = 1;
  if (i == text.size()) return false;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  return true;
}

inline BigInt parse_bigint(std::string_view text) {
  if (!is_decimal_integer(text)) {
    throw InvalidSpec("not a decimal integer: '" + std::string(text) + "'");
  }
  std::string_view digits = text;
  bool negative = false;
  if (digits[0] == '-' || digits[0] == '+') {
    negative = digits[0] == '-';
    digits.remove_prefix(1);
  }
  // Leading zeros would switch cpp_int to octal.
  while (digits.size() > 1 && digits[0] == '0') digits.remove_prefix(1);
  const BigInt value{std::string(digits)};
  return negative ? BigInt(-value) : value;
}

/// num/den in lowest terms; the sign is carried by the numerator.
inline BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("zero denominator");
  if (den < 0) return BigRational(BigInt(-num), BigInt(-den));
  return BigRational(num, den);
}

/// "num/den", or a plain integer.
inline BigRational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return BigRational(parse_bigint(text));
  BigInt num = parse_bigint(text.substr(0, slash));
  BigInt den = parse_bigint(text.substr(slash + 1));
  if (den == 0) throw InvalidSpec("zero denominator in '" + std::string(text) + "'");
  return make_rational(num, den);
}

inline std::string to_string(const BigInt& x) { return x.str(); }

inline std::string to_string(const BigRational& r) {
  const BigInt& den = boost::multiprecision::denominator(r);
  if (den == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

}  // namespace pqs
