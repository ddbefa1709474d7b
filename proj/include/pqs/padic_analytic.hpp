#pragma once

// p-adic exp/log series, exponential polynomials sum c * z^j * exp_p(rate * z),
// and Newton-Hensel root lifting for anything that can be evaluated and
// differentiated.

#include <concepts>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pqs/bigint.hpp"
#include "pqs/error.hpp"
#include "pqs/padic_core.hpp"

namespace pqs {

/// Extra digits carried past the target so truncated series tails are
/// provably below the requested precision.
inline constexpr int kSeriesGuard = 8;

/// The disc D(0, rho) with rho = p^(-1/(p-1)) on which exp_p converges.
/// On Q_p, ||z|| < rho is nu_p(z) >= 1 for odd p and nu_2(z) >= 2.
class ConvergenceRadius {
 public:
  explicit ConvergenceRadius(Prime p) : p_(p) {}

  Prime prime() const noexcept { return p_; }

  /// log_p(rho) = -1/(p-1).
  BigRational exponent() const { return BigRational(-1, static_cast<long long>(p_.value() - 1)); }

  std::int64_t min_valuation() const noexcept { return p_.is_two() ? 2 : 1; }

  bool contains(const PAdicApprox& z) const {
    if (z.is_exact_zero()) return true;
    if (!z.is_nonzero()) {
      if (z.valuation_lower_bound() >= Valuation(min_valuation())) return true;
      throw PrecisionExhausted("precision exhausted: cannot decide membership in D(0, rho)");
    }
    return z.valuation() >= Valuation(min_valuation());
  }

  std::string describe() const {
    const std::string ps = std::to_string(p_.value());
    return "D(0, " + ps + "^(-1/" + std::to_string(p_.value() - 1) + ")) = {z : nu_" + ps +
           "(z) >= " + std::to_string(min_valuation()) + "}";
  }

 private:
  Prime p_;
};

namespace detail {

inline std::int64_t floor_log(std::uint64_t n, std::uint64_t base) {
  std::int64_t k = 0;
  while (n >= base) {
    n /= base;
    ++k;
  }
  return k;
}

inline std::string domain_message(const char* fn, const PAdicApprox& arg, const char* what, Prime p) {
  const ConvergenceRadius disc(p);
  std::string got;
  try {
    got = arg.valuation().to_string();
  } catch (const PrecisionExhausted&) {
    got = ">= " + arg.valuation_lower_bound().to_string();
  }
  return std::string(fn) + ": domain violation, " + what + " must lie in " + disc.describe() + " but nu_" +
         std::to_string(p.value()) + " = " + got;
}

}  // namespace detail

/// exp_p(z) = sum z^n / n!, correct modulo p^precision (or fewer digits
/// when z itself is known to fewer).
inline PAdicApprox exp_p(const PAdicApprox& z_in, int precision = kDefaultPrecision) {
  const Prime p = z_in.prime();
  if (z_in.is_exact_zero()) return embed(1, p, precision);
  const ConvergenceRadius disc(p);
  if (!disc.contains(z_in)) throw DomainError(detail::domain_message("exp_p", z_in, "z", p));
  const PAdicApprox z = z_in.with_min_precision(precision);

  const std::int64_t target = std::min<std::int64_t>(precision, z.absolute_precision().value());
  if (!z.is_nonzero()) return PAdicApprox::from_parts(p, 0, 1, static_cast<int>(target));

  const BigInt modulus = prime_power(p, target);
  const std::int64_t v = z.valuation().value();
  const std::int64_t pm1 = static_cast<std::int64_t>(p.value()) - 1;
  BigInt sum = 1;
  std::int64_t term_val = 0;
  BigInt term_unit = 1;
  for (std::int64_t n = 1;; ++n) {
    // nu_p(n!) <= (n-1)/(p-1), so n*v - (n-1)/(p-1) bounds nu_p(z^n/n!) from below
    // and increases with n.
    if (n * v * pm1 - (n - 1) > (target + kSeriesGuard) * pm1) break;
    auto [vn, un] = split_prime_power(BigInt(n), p);
    term_val += v - vn;
    term_unit = mod_floor(term_unit * z.unit() * inverse_mod(un, modulus), modulus);
    if (term_val < target) sum += prime_power(p, term_val) * term_unit;
  }
  return PAdicApprox::from_parts(p, 0, sum, static_cast<int>(target));
}

/// log_p(z) = sum (-1)^(n-1) (z-1)^n / n for z in D(1, rho).
inline PAdicApprox log_p(const PAdicApprox& z_in, int precision = kDefaultPrecision) {
  const Prime p = z_in.prime();
  const PAdicApprox z = z_in.with_min_precision(precision);
  const PAdicApprox t = sub(z, embed(1, p, std::max(1, z.precision())));
  if (t.is_exact_zero()) return PAdicApprox::exact_zero(p);
  const ConvergenceRadius disc(p);
  if (!disc.contains(t)) throw DomainError(detail::domain_message("log_p", t, "z - 1", p));

  const std::int64_t target =
      t.is_exact() ? precision : std::min<std::int64_t>(precision, t.absolute_precision().value());
  if (!t.is_nonzero()) return PAdicApprox::zero_to(p, target);

  const BigInt modulus = prime_power(p, target);
  const std::int64_t w = t.valuation().value();
  BigInt sum = 0;
  BigInt power_unit = 1;
  for (std::int64_t n = 1;; ++n) {
    // nu_p(t^n / n) >= n*w - floor(log_p n), non-decreasing in n.
    if (n * w - detail::floor_log(static_cast<std::uint64_t>(n), p.value()) > target + kSeriesGuard) break;
    power_unit = mod_floor(power_unit * t.unit(), modulus);
    auto [vn, un] = split_prime_power(BigInt(n), p);
    const std::int64_t val = n * w - vn;
    if (val >= target) continue;
    BigInt term = prime_power(p, val) * mod_floor(power_unit * inverse_mod(un, modulus), modulus);
    if (n % 2 == 0) term = -term;
    sum += term;
  }
  return PAdicApprox::from_residue(p, sum, target);
}

/// One summand c * z^degree * exp_p(rate * z).
struct ExpTerm {
  PAdicApprox coefficient;
  std::uint32_t degree = 0;
  PAdicApprox rate;

  friend bool operator==(const ExpTerm&, const ExpTerm&) = default;
};

/// A finite sum of ExpTerms over a single prime. Every rate lies in
/// D(0, rho), so the function is analytic on all of Z_p.
class ExponentialPolynomial {
 public:
  explicit ExponentialPolynomial(Prime p, std::vector<ExpTerm> terms = {}) : p_(p), terms_(std::move(terms)) {
    const ConvergenceRadius disc(p_);
    for (const ExpTerm& t : terms_) {
      if (t.coefficient.prime() != p_ || t.rate.prime() != p_) {
        throw DomainError("exponential polynomial term over a different prime");
      }
      if (!disc.contains(t.rate)) {
        throw DomainError(detail::domain_message("ExponentialPolynomial", t.rate, "every rate", p_));
      }
    }
  }

  Prime prime() const noexcept { return p_; }
  const std::vector<ExpTerm>& terms() const noexcept { return terms_; }

  friend bool operator==(const ExponentialPolynomial&, const ExponentialPolynomial&) = default;

 private:
  Prime p_;
  std::vector<ExpTerm> terms_;
};

inline PAdicApprox eval(const ExponentialPolynomial& f, const PAdicApprox& z, int precision = kDefaultPrecision) {
  if (z.prime() != f.prime()) throw DomainError("evaluation point over a different prime");
  if (z.valuation_lower_bound() < Valuation(0)) throw DomainError("evaluation point is not in Z_p");
  PAdicApprox sum = PAdicApprox::exact_zero(f.prime());
  for (const ExpTerm& t : f.terms()) {
    const PAdicApprox e = exp_p(mul(t.rate, z), precision);
    sum = add(sum, mul(mul(t.coefficient, pow(z, t.degree)), e));
  }
  return sum;
}

/// Termwise: (c, j, r) -> (c*j, j-1, r) + (c*r, j, r). Exact-zero
/// coefficients are dropped.
inline ExponentialPolynomial derivative(const ExponentialPolynomial& f) {
  std::vector<ExpTerm> out;
  const Prime p = f.prime();
  for (const ExpTerm& t : f.terms()) {
    if (t.degree > 0) {
      PAdicApprox c = mul(t.coefficient, embed(static_cast<long long>(t.degree), p, std::max(1, t.coefficient.precision())));
      if (!c.is_exact_zero()) out.push_back({std::move(c), t.degree - 1, t.rate});
    }
    PAdicApprox c = mul(t.coefficient, t.rate);
    if (!c.is_exact_zero()) out.push_back({std::move(c), t.degree, t.rate});
  }
  return ExponentialPolynomial(p, std::move(out));
}

template <class F>
concept AnalyticFunction = requires(const F& f, const PAdicApprox& z, int n) {
  { eval(f, z, n) } -> std::convertible_to<PAdicApprox>;
  { derivative(f) } -> std::convertible_to<F>;
};

struct HenselLift {
  PAdicApprox root;
  int iterations = 0;
  Valuation start_residual;    ///< nu_p(f(b0)), or a lower bound when f(b0) is 0 to precision
  Valuation start_derivative;  ///< nu_p(f'(b0))
};

inline constexpr int kHenselGuard = 8;

inline int ceil_log2(std::int64_t n) {
  int k = 0;
  while ((std::int64_t{1} << k) < n) ++k;
  return k;
}

/// Newton iteration b <- b - f(b)/f'(b) from b0 until f(b) = 0 mod p^precision.
///
/// Requires nu_p(f(b0)) >= 1 and nu_p(f(b0)) > 2 nu_p(f'(b0)) (with a unit
/// derivative this is ||f(b0)|| < 1 = ||f'(b0)||). The root then satisfies
/// nu_p(b - b0) >= nu_p(f(b0)) - nu_p(f'(b0)).
template <AnalyticFunction F>
HenselLift hensel_lift(const F& f, const PAdicApprox& b0, int precision = kDefaultPrecision) {
  if (precision < 1) throw DomainError("precision must be at least 1");
  if (b0.valuation_lower_bound() < Valuation(0)) throw DomainError("hensel_lift: b0 must lie in Z_p");
  const F df = derivative(f);
  const int probe = precision + kHenselGuard;
  const PAdicApprox f0 = eval(f, b0, probe);
  const PAdicApprox d0 = eval(df, b0, probe);

  const Valuation r = f0.valuation_lower_bound();
  if (!d0.is_nonzero()) {
    throw PreconditionFailure("hensel_lift: f'(b0) vanishes to " + d0.valuation_lower_bound().to_string() +
                              " digits; nu_p(f(b0)) >= " + r.to_string());
  }
  const Valuation e = d0.valuation();
  if (r < Valuation(1) || e < Valuation(0) || !(r > e + e)) {
    throw PreconditionFailure("hensel_lift: need ||f(b0)|| < 1 and ||f(b0)|| < ||f'(b0)||^2, got nu_p(f(b0)) = " +
                              r.to_string() + ", nu_p(f'(b0)) = " + e.to_string());
  }

  const int work = precision + kHenselGuard + 2 * static_cast<int>(e.value());
  const int max_iterations = ceil_log2(precision) + 2;
  PAdicApprox b = b0.with_min_precision(work);
  int iterations = 0;
  for (;;) {
    const PAdicApprox fb = eval(f, b, work);
    if (fb.valuation_lower_bound() >= Valuation(precision)) break;
    if (iterations == max_iterations) {
      throw InternalError("hensel_lift: Newton iteration failed to converge in " + std::to_string(max_iterations) +
                          " steps");
    }
    b = sub(b, div(fb, eval(df, b, work))).truncated(work);
    ++iterations;
  }
  return {std::move(b), iterations, r, e};
}

}  // namespace pqs
