#pragma once

// Integer linear recurrences x_n = b_1 x_{n-1} + ... + b_k x_{n-k}: exact and
// modular term generation, root factorizations of the characteristic
// polynomial, and closed forms x_n = sum_i P_i(n) a_i^n.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pqs/bareiss.hpp"
#include "pqs/bigint.hpp"
#include "pqs/error.hpp"
#include "pqs/padic_core.hpp"

namespace pqs {

class RecurrenceSpec {
 public:
  /// coeffs = (b_1, ..., b_k), initials = (x_0, ..., x_{k-1}).
  RecurrenceSpec(std::vector<BigInt> coeffs, std::vector<BigInt> initials)
      : coeffs_(std::move(coeffs)), initials_(std::move(initials)) {
    if (coeffs_.size() < 2) {
      throw InvalidSpec("order k = " + std::to_string(coeffs_.size()) + " but k >= 2 is required",
                        InvalidSpec::Kind::order_too_small);
    }
    if (initials_.size() != coeffs_.size()) {
      throw InvalidSpec("order k = " + std::to_string(coeffs_.size()) + " needs " + std::to_string(coeffs_.size()) +
                            " initial values, got " + std::to_string(initials_.size()),
                        InvalidSpec::Kind::length_mismatch);
    }
    if (coeffs_.back() == 0) throw InvalidSpec("b_k must be nonzero", InvalidSpec::Kind::zero_last_coefficient);
  }

  /// Checks the declared order against the vectors before constructing.
  static RecurrenceSpec with_order(std::int64_t order, std::vector<BigInt> coeffs, std::vector<BigInt> initials) {
    if (order < 2) {
      throw InvalidSpec("order k = " + std::to_string(order) + " but k >= 2 is required",
                        InvalidSpec::Kind::order_too_small);
    }
    const auto k = static_cast<std::size_t>(order);
    if (coeffs.size() != k || initials.size() != k) {
      throw InvalidSpec("order k = " + std::to_string(order) + " but got " + std::to_string(coeffs.size()) +
                            " coefficients and " + std::to_string(initials.size()) + " initial values",
                        InvalidSpec::Kind::length_mismatch);
    }
    return RecurrenceSpec(std::move(coeffs), std::move(initials));
  }

  std::size_t order() const noexcept { return coeffs_.size(); }
  const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }
  const std::vector<BigInt>& initials() const noexcept { return initials_; }

  friend bool operator==(const RecurrenceSpec&, const RecurrenceSpec&) = default;

 private:
  std::vector<BigInt> coeffs_;
  std::vector<BigInt> initials_;
};

struct Root {
  BigInt value;
  std::uint32_t multiplicity = 1;

  friend bool operator==(const Root&, const Root&) = default;
};

/// Claimed factorization prod (x - a_i)^{m_i} of the characteristic polynomial.
class RootFactorization {
 public:
  RootFactorization() = default;

  explicit RootFactorization(std::vector<Root> roots) : roots_(std::move(roots)) {
    for (std::size_t i = 0; i < roots_.size(); ++i) {
      if (roots_[i].multiplicity == 0) {
        throw InvalidSpec("root " + to_string(roots_[i].value) + " has multiplicity 0", InvalidSpec::Kind::invalid_roots);
      }
      if (roots_[i].value == 0) throw InvalidSpec("0 cannot be a root when b_k != 0", InvalidSpec::Kind::invalid_roots);
      for (std::size_t j = 0; j < i; ++j) {
        if (roots_[j].value == roots_[i].value) {
          throw InvalidSpec("root " + to_string(roots_[i].value) + " listed twice", InvalidSpec::Kind::invalid_roots);
        }
      }
    }
  }

  const std::vector<Root>& roots() const noexcept { return roots_; }
  std::size_t distinct() const noexcept { return roots_.size(); }

  std::size_t degree() const noexcept {
    std::size_t d = 0;
    for (const Root& r : roots_) d += r.multiplicity;
    return d;
  }

  friend bool operator==(const RootFactorization&, const RootFactorization&) = default;

 private:
  std::vector<Root> roots_;
};

/// Exact x_n by direct iteration.
inline BigInt term(const RecurrenceSpec& spec, std::uint64_t n) {
  const std::size_t k = spec.order();
  if (n < k) return spec.initials()[n];
  std::vector<BigInt> window = spec.initials();  // window[i] = x_{m+i}
  for (std::uint64_t m = k; m <= n; ++m) {
    BigInt next = 0;
    for (std::size_t i = 0; i < k; ++i) next += spec.coeffs()[i] * window[k - 1 - i];
    std::rotate(window.begin(), window.begin() + 1, window.end());
    window.back() = std::move(next);
  }
  return window.back();
}

/// x_0, ..., x_{n_max} exactly.
inline std::vector<BigInt> terms(const RecurrenceSpec& spec, std::uint64_t n_max) {
  const std::size_t k = spec.order();
  std::vector<BigInt> out;
  out.reserve(n_max + 1);
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    if (n < k) {
      out.push_back(spec.initials()[n]);
      continue;
    }
    BigInt next = 0;
    for (std::size_t i = 0; i < k; ++i) next += spec.coeffs()[i] * out[n - 1 - i];
    out.push_back(std::move(next));
  }
  return out;
}

inline constexpr int kEscalationCeiling = 4096;
inline constexpr std::uint64_t kExactFallbackLimit = 10'000;

struct TermResidue {
  BigInt residue;                     ///< x_n mod p^M, in [0, p^M)
  std::optional<Valuation> valuation;  ///< nullopt: undetermined (too deep for every escalation)
};

namespace detail {

inline std::vector<BigInt> residues_mod(const RecurrenceSpec& spec, const BigInt& modulus, std::uint64_t n_max) {
  const std::size_t k = spec.order();
  std::vector<BigInt> b;
  for (const BigInt& c : spec.coeffs()) b.push_back(mod_floor(c, modulus));
  std::vector<BigInt> out;
  out.reserve(n_max + 1);
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    if (n < k) {
      out.push_back(mod_floor(spec.initials()[n], modulus));
      continue;
    }
    BigInt next = 0;
    for (std::size_t i = 0; i < k; ++i) next += b[i] * out[n - 1 - i];
    out.push_back(mod_floor(next, modulus));
  }
  return out;
}

inline Valuation residue_valuation(const BigInt& r, Prime p) { return Valuation(split_prime_power(r, p).first); }

}  // namespace detail

/// Residues of x_0..x_{n_max} mod p^M with certified valuations. Terms that
/// vanish mod p^M are recomputed with M doubled up to `ceiling` digits, then
/// exactly for n <= 10^4; anything still unresolved is marked undetermined.
inline std::vector<TermResidue> terms_mod(const RecurrenceSpec& spec, Prime p, int M, std::uint64_t n_max,
                                          int ceiling = kEscalationCeiling) {
  if (M < 1) throw DomainError("modulus exponent M must be at least 1");
  const std::vector<BigInt> base = detail::residues_mod(spec, prime_power(p, M), n_max);
  std::vector<TermResidue> out;
  out.reserve(base.size());
  std::vector<std::uint64_t> pending;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    if (base[n] != 0) {
      out.push_back({base[n], detail::residue_valuation(base[n], p)});
    } else {
      out.push_back({0, std::nullopt});
      pending.push_back(n);
    }
  }

  for (int m = 2 * M; !pending.empty() && m <= ceiling; m *= 2) {
    const std::vector<BigInt> deeper = detail::residues_mod(spec, prime_power(p, m), pending.back());
    std::vector<std::uint64_t> still;
    for (const std::uint64_t n : pending) {
      if (deeper[n] != 0) {
        out[n].valuation = detail::residue_valuation(deeper[n], p);
      } else {
        still.push_back(n);
      }
    }
    pending = std::move(still);
  }

  if (!pending.empty() && pending.front() <= kExactFallbackLimit) {
    const std::uint64_t last = std::min(pending.back(), kExactFallbackLimit);
    const std::vector<BigInt> exact = terms(spec, last);
    for (const std::uint64_t n : pending) {
      if (n > last) break;
      out[n].valuation = exact[n] == 0 ? Valuation::infinity() : Valuation(split_prime_power(exact[n], p).first);
    }
  }
  return out;
}

/// Coefficients of prod (x - a_i)^{m_i}, highest degree first.
inline std::vector<BigInt> expand_factorization(const RootFactorization& roots) {
  std::vector<BigInt> poly{1};
  for (const Root& r : roots.roots()) {
    for (std::uint32_t m = 0; m < r.multiplicity; ++m) {
      poly.push_back(0);
      for (std::size_t i = poly.size() - 1; i > 0; --i) poly[i] -= r.value * poly[i - 1];
    }
  }
  return poly;
}

/// x^k - b_1 x^{k-1} - ... - b_k, highest degree first.
inline std::vector<BigInt> characteristic_polynomial(const RecurrenceSpec& spec) {
  std::vector<BigInt> poly{1};
  for (const BigInt& b : spec.coeffs()) poly.push_back(-b);
  return poly;
}

inline bool validate_factorization(const RecurrenceSpec& spec, const RootFactorization& roots) {
  return expand_factorization(roots) == characteristic_polynomial(spec);
}

inline constexpr std::uint64_t kRootScanLimit = 1'000'000'000'000ULL;

/// Integer roots of the characteristic polynomial by the rational root
/// theorem. Returns a factorization only when every root is an integer;
/// gives up (nullopt) when |b_k| is too large to scan its divisors.
inline std::optional<RootFactorization> find_integer_roots(const RecurrenceSpec& spec) {
  const BigInt constant = abs(spec.coeffs().back());
  if (constant > kRootScanLimit) return std::nullopt;
  const auto c = static_cast<std::uint64_t>(constant);
  std::vector<std::uint64_t> divisors;
  for (std::uint64_t d = 1; d * d <= c; ++d) {
    if (c % d != 0) continue;
    divisors.push_back(d);
    if (d * d != c) divisors.push_back(c / d);
  }
  std::sort(divisors.begin(), divisors.end());

  std::vector<BigInt> poly = characteristic_polynomial(spec);
  std::vector<Root> found;
  // Synthetic division by (x - a); returns false if a is not a root.
  auto divide_out = [&poly](const BigInt& a) {
    std::vector<BigInt> q(poly.size() - 1);
    BigInt carry = 0;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
      carry = poly[i] + carry * a;
      q[i] = carry;
    }
    if (poly.back() + carry * a != 0) return false;
    poly = std::move(q);
    return true;
  };
  for (const std::uint64_t d : divisors) {
    for (const BigInt& a : {BigInt(d), BigInt(-BigInt(d))}) {
      std::uint32_t m = 0;
      while (poly.size() > 1 && divide_out(a)) ++m;
      if (m > 0) found.push_back({a, m});
    }
  }
  if (poly.size() != 1) return std::nullopt;
  return RootFactorization(std::move(found));
}

struct ClosedForm {
  RootFactorization roots;
  Matrix<BigInt> matrix;                           ///< row r, column (i, j): r^j a_i^r
  BigInt det;                                      ///< det(matrix), nonzero
  std::vector<BigRational> coefficients;           ///< C in column order
  std::vector<std::vector<BigRational>> polynomials;  ///< per root: c_{i,0}, ..., c_{i,m_i-1}

  friend bool operator==(const ClosedForm&, const ClosedForm&) = default;
};

/// The confluent Vandermonde matrix with one column n^j a^n per root a and
/// 0 <= j < multiplicity, evaluated at rows n = 0..k-1 (0^0 = 1).
inline Matrix<BigInt> confluent_vandermonde(const RootFactorization& roots) {
  const std::size_t k = roots.degree();
  Matrix<BigInt> a(k);
  for (std::size_t r = 0; r < k; ++r) {
    for (const Root& root : roots.roots()) {
      const BigInt ar = ipow(root.value, r);
      for (std::uint32_t j = 0; j < root.multiplicity; ++j) a[r].push_back(ipow(BigInt(r), j) * ar);
    }
  }
  return a;
}

inline ClosedForm solve_closed_form(const RecurrenceSpec& spec, const RootFactorization& roots) {
  if (!validate_factorization(spec, roots)) {
    throw InvalidSpec("roots do not factor the characteristic polynomial", InvalidSpec::Kind::invalid_roots);
  }
  ClosedForm cf{roots, confluent_vandermonde(roots), 0, {}, {}};
  auto solved = solve_exact(cf.matrix, spec.initials());
  if (solved.determinant == 0) throw InternalError("confluent Vandermonde matrix is singular");
  cf.det = std::move(solved.determinant);
  cf.coefficients = std::move(solved.solution);
  std::size_t column = 0;
  for (const Root& root : roots.roots()) {
    cf.polynomials.emplace_back(cf.coefficients.begin() + static_cast<std::ptrdiff_t>(column),
                                cf.coefficients.begin() + static_cast<std::ptrdiff_t>(column + root.multiplicity));
    column += root.multiplicity;
  }
  return cf;
}

inline BigRational eval_closed_form(const ClosedForm& cf, std::uint64_t n) {
  BigRational sum = 0;
  const BigInt nb(n);
  for (std::size_t i = 0; i < cf.polynomials.size(); ++i) {
    BigRational poly = 0;
    for (std::size_t j = cf.polynomials[i].size(); j-- > 0;) poly = poly * nb + cf.polynomials[i][j];
    sum += poly * BigRational(ipow(cf.roots.roots()[i].value, n));
  }
  return sum;
}

}  // namespace pqs
