#pragma once

// Exact rational valuations and finite-precision p-adic numbers.
//
// A PAdicApprox is p^v * u with u a unit known modulo p^N (N is the
// relative precision), so the value is known modulo p^(v+N). Values that
// came from exact rationals keep that rational alongside; arithmetic on two
// exact operands stays exact, which is how a true cancellation is told apart
// from a cancellation that merely ran out of digits.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "pqs/bigint.hpp"
#include "pqs/error.hpp"

namespace pqs {

inline constexpr int kDefaultPrecision = 32;

/// An integer p-adic valuation or +infinity (the valuation of zero).
class Valuation {
 public:
  constexpr Valuation(std::int64_t v) noexcept : value_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr Valuation infinity() noexcept { return Valuation(kInfinity); }

  constexpr bool is_infinite() const noexcept { return value_ == kInfinity; }
  constexpr bool is_finite() const noexcept { return value_ != kInfinity; }

  std::int64_t value() const {
    if (is_infinite()) throw DomainError("valuation is infinite");
    return value_;
  }

  friend constexpr auto operator<=>(Valuation, Valuation) = default;
  friend constexpr bool operator==(Valuation, Valuation) = default;

  friend constexpr Valuation operator+(Valuation a, Valuation b) noexcept {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return Valuation(a.value_ + b.value_);
  }

  std::string to_string() const { return is_infinite() ? "inf" : std::to_string(value_); }

  static Valuation parse(std::string_view text) {
    if (text == "inf") return infinity();
    if (!is_decimal_integer(text)) throw InvalidSpec("bad valuation '" + std::string(text) + "'");
    return Valuation(std::stoll(std::string(text)));
  }

  friend std::ostream& operator<<(std::ostream& os, Valuation v) { return os << v.to_string(); }

 private:
  static constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();
  std::int64_t value_;
};

inline Valuation valuation(const BigInt& n, Prime p) {
  if (n == 0) return Valuation::infinity();
  return split_prime_power(n, p).first;
}

/// nu_p(r): the k in r = +-p^k a/b with a, b prime to p.
inline Valuation valuation(const BigRational& r, Prime p) {
  if (r == 0) return Valuation::infinity();
  const auto num = valuation(BigInt(boost::multiprecision::numerator(r)), p);
  const auto den = valuation(BigInt(boost::multiprecision::denominator(r)), p);
  return num.value() - den.value();
}

/// ||r||_p as an exact power p^exponent; zero has absolute value 0.
struct AbsoluteValue {
  bool zero = false;
  std::int64_t exponent = 0;

  BigRational value(Prime p) const {
    if (zero) return BigRational(0);
    if (exponent >= 0) return BigRational(prime_power(p, exponent));
    return BigRational(BigInt(1), prime_power(p, -exponent));
  }

  friend bool operator==(const AbsoluteValue&, const AbsoluteValue&) = default;
};

inline AbsoluteValue abs_p(const BigRational& r, Prime p) {
  const Valuation v = valuation(r, p);
  if (v.is_infinite()) return {true, 0};
  return {false, -v.value()};
}

class PAdicApprox;
PAdicApprox embed(const BigRational& r, Prime p, int precision);

class PAdicApprox {
 public:
  enum class Kind {
    exact_zero,         ///< exactly 0
    zero_to_precision,  ///< known only to be 0 modulo p^absolute_precision
    nonzero,            ///< p^valuation * unit, unit known mod p^precision
  };

  static PAdicApprox exact_zero(Prime p) { return PAdicApprox(p, Kind::exact_zero); }

  static PAdicApprox zero_to(Prime p, std::int64_t absolute_precision) {
    PAdicApprox z(p, Kind::zero_to_precision);
    z.valuation_ = absolute_precision;
    return z;
  }

  /// p^valuation * unit with unit reduced mod p^precision; the unit must be prime to p.
  static PAdicApprox from_parts(Prime p, std::int64_t valuation, const BigInt& unit, int precision,
                                std::optional<BigRational> exact = std::nullopt) {
    if (precision < 1) throw DomainError("relative precision must be at least 1");
    PAdicApprox x(p, Kind::nonzero);
    x.valuation_ = valuation;
    x.precision_ = precision;
    x.unit_ = mod_floor(unit, prime_power(p, precision));
    if (x.unit_ % p.big() == 0) throw DomainError("unit part is divisible by p");
    x.exact_ = std::move(exact);
    return x;
  }

  /// The element known as residue mod p^(shift + digits), scaled by p^shift.
  static PAdicApprox from_residue(Prime p, const BigInt& residue, std::int64_t digits, std::int64_t shift = 0) {
    const BigInt r = mod_floor(residue, prime_power(p, digits));
    if (r == 0) return zero_to(p, shift + digits);
    auto [v, unit] = split_prime_power(r, p);
    return from_parts(p, shift + v, unit, static_cast<int>(digits - v));
  }

  Prime prime() const noexcept { return p_; }
  Kind kind() const noexcept { return kind_; }
  bool is_exact_zero() const noexcept { return kind_ == Kind::exact_zero; }
  bool is_nonzero() const noexcept { return kind_ == Kind::nonzero; }
  bool is_exact() const noexcept { return kind_ == Kind::exact_zero || exact_.has_value(); }
  const std::optional<BigRational>& exact_value() const noexcept { return exact_; }

  /// Exact valuation. Throws PrecisionExhausted for a value that is zero
  /// to all tracked digits but not known to be exactly zero.
  Valuation valuation() const {
    switch (kind_) {
      case Kind::exact_zero: return Valuation::infinity();
      case Kind::zero_to_precision:
        throw PrecisionExhausted("precision exhausted: value is 0 mod " + std::to_string(p_.value()) + "^" +
                                 std::to_string(valuation_));
      case Kind::nonzero: break;
    }
    return valuation_;
  }

  /// A valuation every representative is known to have at least.
  Valuation valuation_lower_bound() const noexcept {
    if (kind_ == Kind::exact_zero) return Valuation::infinity();
    return valuation_;
  }

  const BigInt& unit() const {
    if (kind_ != Kind::nonzero) throw DomainError("zero has no unit part");
    return unit_;
  }

  /// Relative precision N (0 for the zero kinds).
  int precision() const noexcept { return kind_ == Kind::nonzero ? precision_ : 0; }

  /// Digits of the value that are known: v + N, or the zero bound.
  Valuation absolute_precision() const noexcept {
    switch (kind_) {
      case Kind::exact_zero: return Valuation::infinity();
      case Kind::zero_to_precision: return valuation_;
      case Kind::nonzero: break;
    }
    return valuation_ + precision_;
  }

  /// The value mod p^digits, in [0, p^digits). Needs a p-adic integer known
  /// to at least that many digits.
  BigInt residue(std::int64_t digits) const {
    if (digits < 0) throw DomainError("negative digit count");
    const BigInt modulus = prime_power(p_, digits);
    if (kind_ == Kind::exact_zero) return 0;
    if (exact_) {
      if (valuation_ < 0) throw DomainError("value is not a p-adic integer");
      const BigInt& num = boost::multiprecision::numerator(*exact_);
      const BigInt& den = boost::multiprecision::denominator(*exact_);
      return mod_floor(num * inverse_mod(den, modulus), modulus);
    }
    if (absolute_precision() < Valuation(digits)) {
      throw PrecisionExhausted("precision exhausted: need " + std::to_string(digits) + " digits, have " +
                               absolute_precision().to_string());
    }
    if (kind_ == Kind::zero_to_precision || valuation_ >= digits) return 0;
    if (valuation_ < 0) throw DomainError("value is not a p-adic integer");
    return mod_floor(prime_power(p_, valuation_) * unit_, modulus);
  }

  /// The same value with the exact shadow dropped.
  PAdicApprox approximate() const {
    PAdicApprox copy = *this;
    copy.exact_.reset();
    if (kind_ == Kind::exact_zero) throw DomainError("cannot approximate exact zero without a precision");
    return copy;
  }

  /// Inexact copy with relative precision at most n.
  PAdicApprox truncated(int n) const {
    if (kind_ != Kind::nonzero) return *this;
    if (n >= precision_) return approximate();
    return from_parts(p_, valuation_, unit_, n);
  }

  /// Exact values re-expanded so the unit carries at least n digits.
  PAdicApprox with_min_precision(int n) const {
    if (kind_ != Kind::nonzero || !exact_ || precision_ >= n) return *this;
    return embed(*exact_, p_, n);
  }

  std::string to_string() const {
    const std::string ps = std::to_string(p_.value());
    switch (kind_) {
      case Kind::exact_zero: return "0";
      case Kind::zero_to_precision: return "O(" + ps + "^" + std::to_string(valuation_) + ")";
      case Kind::nonzero: break;
    }
    std::string s = ps + "^" + std::to_string(valuation_) + "*" + unit_.str();
    if (exact_) return s + " [= " + pqs::to_string(*exact_) + "]";
    return s + " + O(" + ps + "^" + std::to_string(valuation_ + precision_) + ")";
  }

  friend bool operator==(const PAdicApprox& a, const PAdicApprox& b) {
    if (a.p_ != b.p_ || a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case Kind::exact_zero: return true;
      case Kind::zero_to_precision: return a.valuation_ == b.valuation_;
      case Kind::nonzero: break;
    }
    return a.valuation_ == b.valuation_ && a.precision_ == b.precision_ && a.unit_ == b.unit_ &&
           a.exact_ == b.exact_;
  }

  friend std::ostream& operator<<(std::ostream& os, const PAdicApprox& x) { return os << x.to_string(); }

 private:
  PAdicApprox(Prime p, Kind kind) : p_(p), kind_(kind) {}

  Prime p_;
  Kind kind_;
  std::int64_t valuation_ = 0;  // absolute precision for zero_to_precision
  int precision_ = 0;
  BigInt unit_;
  std::optional<BigRational> exact_;
};

/// r as a p-adic number with relative precision n.
inline PAdicApprox embed(const BigRational& r, Prime p, int precision) {
  if (precision < 1) throw DomainError("precision must be at least 1");
  if (r == 0) return PAdicApprox::exact_zero(p);
  const BigInt& num = boost::multiprecision::numerator(r);
  const BigInt& den = boost::multiprecision::denominator(r);
  auto [vn, un] = split_prime_power(num, p);
  auto [vd, ud] = split_prime_power(den, p);
  const BigInt modulus = prime_power(p, precision);
  return PAdicApprox::from_parts(p, vn - vd, un * inverse_mod(ud, modulus), precision, r);
}

inline PAdicApprox embed(const BigInt& n, Prime p, int precision) { return embed(BigRational(n), p, precision); }

inline PAdicApprox embed(long long n, Prime p, int precision) { return embed(BigRational(n), p, precision); }

namespace detail {

inline void require_same_prime(const PAdicApprox& x, const PAdicApprox& y) {
  if (x.prime() != y.prime()) {
    throw DomainError("mismatched primes " + std::to_string(x.prime().value()) + " and " +
                      std::to_string(y.prime().value()));
  }
}

/// Relative precision an exact nonzero operand needs so that it does not
/// limit a result known to absolute precision `absolute`.
inline int needed_precision(const PAdicApprox& exact, Valuation absolute) {
  if (absolute.is_infinite()) return exact.precision();
  const std::int64_t need = absolute.value() - exact.valuation().value();
  return static_cast<int>(std::clamp<std::int64_t>(need, 1, std::numeric_limits<int>::max() / 2));
}

}  // namespace detail

inline PAdicApprox neg(const PAdicApprox& x) {
  if (!x.is_nonzero()) return x;
  std::optional<BigRational> exact;
  if (x.exact_value()) exact = -*x.exact_value();
  const BigInt modulus = prime_power(x.prime(), x.precision());
  return PAdicApprox::from_parts(x.prime(), x.valuation().value(), modulus - x.unit(), x.precision(),
                                 std::move(exact));
}

/// Sum; the relative precision drops by however many leading digits cancel.
inline PAdicApprox add(const PAdicApprox& x_in, const PAdicApprox& y_in) {
  detail::require_same_prime(x_in, y_in);
  const Prime p = x_in.prime();
  if (x_in.is_exact_zero()) return y_in;
  if (y_in.is_exact_zero()) return x_in;
  if (x_in.exact_value() && y_in.exact_value()) {
    return embed(*x_in.exact_value() + *y_in.exact_value(), p, std::max(x_in.precision(), y_in.precision()));
  }

  PAdicApprox x = x_in;
  PAdicApprox y = y_in;
  if (x.exact_value()) x = x.with_min_precision(detail::needed_precision(x, y.absolute_precision()));
  if (y.exact_value()) y = y.with_min_precision(detail::needed_precision(y, x.absolute_precision()));

  const std::int64_t a = std::min(x.absolute_precision(), y.absolute_precision()).value();
  if (!x.is_nonzero() && !y.is_nonzero()) return PAdicApprox::zero_to(p, a);
  if (!x.is_nonzero() || !y.is_nonzero()) {
    const PAdicApprox& v = x.is_nonzero() ? x : y;
    const std::int64_t vv = v.valuation().value();
    if (vv >= a) return PAdicApprox::zero_to(p, a);
    return PAdicApprox::from_parts(p, vv, v.unit(), static_cast<int>(a - vv));
  }

  const std::int64_t vx = x.valuation().value();
  const std::int64_t vy = y.valuation().value();
  const std::int64_t vmin = std::min(vx, vy);
  const BigInt sum = x.unit() * prime_power(p, vx - vmin) + y.unit() * prime_power(p, vy - vmin);
  return PAdicApprox::from_residue(p, sum, a - vmin, vmin);
}

inline PAdicApprox sub(const PAdicApprox& x, const PAdicApprox& y) { return add(x, neg(y)); }

inline PAdicApprox mul(const PAdicApprox& x_in, const PAdicApprox& y_in) {
  detail::require_same_prime(x_in, y_in);
  const Prime p = x_in.prime();
  if (x_in.is_exact_zero() || y_in.is_exact_zero()) return PAdicApprox::exact_zero(p);
  if (x_in.exact_value() && y_in.exact_value()) {
    return embed(*x_in.exact_value() * *y_in.exact_value(), p, std::max(x_in.precision(), y_in.precision()));
  }
  PAdicApprox x = x_in;
  PAdicApprox y = y_in;
  if (x.exact_value()) x = x.with_min_precision(y.precision());
  if (y.exact_value()) y = y.with_min_precision(x.precision());

  if (!x.is_nonzero() || !y.is_nonzero()) {
    return PAdicApprox::zero_to(p, (x.valuation_lower_bound() + y.valuation_lower_bound()).value());
  }
  const int n = std::min(x.precision(), y.precision());
  return PAdicApprox::from_parts(p, x.valuation().value() + y.valuation().value(), x.unit() * y.unit(), n);
}

inline PAdicApprox invert(const PAdicApprox& x) {
  if (x.is_exact_zero()) throw DomainError("inversion of exact zero");
  if (!x.is_nonzero()) {
    throw PrecisionExhausted("precision exhausted: cannot invert a value that is 0 to all tracked digits");
  }
  std::optional<BigRational> exact;
  if (x.exact_value()) exact = 1 / *x.exact_value();
  const BigInt modulus = prime_power(x.prime(), x.precision());
  return PAdicApprox::from_parts(x.prime(), -x.valuation().value(), inverse_mod(x.unit(), modulus), x.precision(),
                                 std::move(exact));
}

inline PAdicApprox div(const PAdicApprox& x, const PAdicApprox& y) { return mul(x, invert(y)); }

/// x^e for e >= 0; x^0 is an exact one.
inline PAdicApprox pow(const PAdicApprox& x, std::uint64_t e) {
  PAdicApprox result = embed(1, x.prime(), std::max(1, x.precision()));
  PAdicApprox base = x;
  while (e != 0) {
    if (e & 1u) result = mul(result, base);
    e >>= 1;
    if (e != 0) base = mul(base, base);
  }
  return result;
}

inline PAdicApprox operator+(const PAdicApprox& x, const PAdicApprox& y) { return add(x, y); }
inline PAdicApprox operator-(const PAdicApprox& x, const PAdicApprox& y) { return sub(x, y); }
inline PAdicApprox operator-(const PAdicApprox& x) { return neg(x); }
inline PAdicApprox operator*(const PAdicApprox& x, const PAdicApprox& y) { return mul(x, y); }

}  // namespace pqs
