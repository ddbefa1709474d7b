#pragma once

// Decides whether the quotient set {x_m / x_n} of an integer recurrence with
// integer characteristic roots is dense in Q_p, and backs every "dense"
// verdict with an analytic certificate: an exponential polynomial f with
// f(n) = scale * x_{n(p-1)} and a simple zero in Z_p.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pqs/bigint.hpp"
#include "pqs/error.hpp"
#include "pqs/padic_analytic.hpp"
#include "pqs/padic_core.hpp"
#include "pqs/recurrence.hpp"

namespace pqs {

enum class TheoremTag {
  distinct_roots,
  double_root,
  full_multiplicity,
  triple_root,
  triple_root_x0_zero,
  two_equal_roots,
  binomial_nondense,
  triple_root_converse,
};

inline std::string to_string(TheoremTag tag) {
  switch (tag) {
    case TheoremTag::distinct_roots: return "Thm1_2_distinct_roots";
    case TheoremTag::double_root: return "Thm1_3_double_root";
    case TheoremTag::full_multiplicity: return "Thm1_4_full_multiplicity";
    case TheoremTag::triple_root: return "Thm1_5a_triple_root";
    case TheoremTag::triple_root_x0_zero: return "Thm1_5a_iff_x0_zero";
    case TheoremTag::two_equal_roots: return "Thm1_5b_two_equal_roots";
    case TheoremTag::binomial_nondense: return "Remark_binomial_nondense";
    case TheoremTag::triple_root_converse: return "Thm1_5a_converse_nondense";
  }
  throw InternalError("unknown theorem tag");
}

inline std::optional<TheoremTag> parse_theorem_tag(std::string_view text) {
  for (const TheoremTag t :
       {TheoremTag::distinct_roots, TheoremTag::double_root, TheoremTag::full_multiplicity, TheoremTag::triple_root,
        TheoremTag::triple_root_x0_zero, TheoremTag::two_equal_roots, TheoremTag::binomial_nondense,
        TheoremTag::triple_root_converse}) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

enum class Outcome { dense_certified, not_dense, unknown };

inline std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::dense_certified: return "DenseCertified";
    case Outcome::not_dense: return "NotDense";
    case Outcome::unknown: return "Unknown";
  }
  throw InternalError("unknown outcome");
}

inline std::optional<Outcome> parse_outcome(std::string_view text) {
  for (const Outcome o : {Outcome::dense_certified, Outcome::not_dense, Outcome::unknown}) {
    if (to_string(o) == text) return o;
  }
  return std::nullopt;
}

inline constexpr int kIdentitySamples = 21;  // n = 0..20

struct IdentitySample {
  std::uint64_t n = 0;
  bool match = false;

  friend bool operator==(const IdentitySample&, const IdentitySample&) = default;
};

struct Certificate {
  ExponentialPolynomial f;
  BigInt scale;
  Valuation f0_valuation;
  Valuation fprime0_valuation;
  std::optional<PAdicApprox> hensel_root;
  std::vector<IdentitySample> identity_samples;
  int precision = kDefaultPrecision;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct Verdict {
  Outcome outcome = Outcome::unknown;
  std::optional<TheoremTag> tag;
  std::optional<Certificate> certificate;
  std::string reason;
  std::vector<std::string> notes;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Which rule fires, before any certificate work.
struct RuleMatch {
  Outcome outcome = Outcome::unknown;
  std::optional<TheoremTag> tag;
  std::string reason;
};

namespace detail {

inline std::string str(const BigInt& x) { return to_string(x); }

inline bool divides(Prime p, const BigInt& x) { return mod_floor(x, p.big()) == 0; }

inline bool is_unit_initials(const RecurrenceSpec& spec) {
  const auto& x = spec.initials();
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (x[i] != 0) return false;
  }
  return x.back() == 1;
}

inline BigInt roots_product(const RootFactorization& roots) {
  BigInt prod = 1;
  for (const Root& r : roots.roots()) prod *= r.value;
  return prod;
}

inline std::optional<std::string> p_divides_a_root(const RootFactorization& roots, Prime p) {
  for (const Root& r : roots.roots()) {
    if (divides(p, r.value)) return "p = " + std::to_string(p.value()) + " divides the root " + str(r.value);
  }
  return std::nullopt;
}

// Each check returns the first failed hypothesis, or nullopt when all hold.

inline std::optional<std::string> fails_distinct_roots(const RecurrenceSpec& spec, const RootFactorization& roots,
                                                       Prime p) {
  for (const Root& r : roots.roots()) {
    if (r.multiplicity > 1) return "root " + str(r.value) + " is repeated";
  }
  const auto& rs = roots.roots();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      const BigInt g = gcd(rs[i].value, rs[j].value);
      if (g != 1) return "roots " + str(rs[i].value) + " and " + str(rs[j].value) + " share the factor " + str(g);
    }
  }
  for (const Root& r : rs) {
    if (abs(r.value) == 1) {
      return "root " + str(r.value) + " has absolute value 1, so the roots are not multiplicatively independent";
    }
  }
  if (auto why = p_divides_a_root(roots, p)) return why;
  if (std::all_of(spec.initials().begin(), spec.initials().end(), [](const BigInt& x) { return x == 0; })) {
    return "the initial values are all zero";
  }
  if (spec.initials()[0] != 0) return "x_0 = " + str(spec.initials()[0]) + " is not 0";
  return std::nullopt;
}

inline std::optional<std::string> fails_double_root(const RecurrenceSpec& spec, const RootFactorization& roots,
                                                    Prime p) {
  int doubles = 0;
  for (const Root& r : roots.roots()) {
    if (r.multiplicity > 2) return "root " + str(r.value) + " has multiplicity " + std::to_string(r.multiplicity);
    if (r.multiplicity == 2) ++doubles;
  }
  if (doubles != 1) return "there are " + std::to_string(doubles) + " double roots, not exactly one";
  if (spec.order() < 3) return "the order is 2, not at least 3";
  if (!is_unit_initials(spec)) return "the initial values are not (0, ..., 0, 1)";
  if (auto why = p_divides_a_root(roots, p)) return why;
  const auto& rs = roots.roots();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if (divides(p, rs[i].value - rs[j].value)) {
        return "roots " + str(rs[i].value) + " and " + str(rs[j].value) + " are congruent mod p";
      }
    }
  }
  return std::nullopt;
}

inline std::optional<std::string> fails_full_multiplicity(const RecurrenceSpec& spec, const RootFactorization& roots,
                                                          Prime p) {
  if (roots.distinct() != 1) return "the characteristic polynomial has " + std::to_string(roots.distinct()) +
                                    " distinct roots, not a single root of multiplicity k";
  if (!is_unit_initials(spec)) return "the initial values are not (0, ..., 0, 1)";
  return p_divides_a_root(roots, p);
}

inline bool is_triple_root(const RecurrenceSpec& spec, const RootFactorization& roots) {
  return spec.order() == 3 && roots.distinct() == 1;
}

inline std::optional<std::string> fails_triple_root(const RecurrenceSpec& spec, const RootFactorization& roots,
                                                    Prime p) {
  if (!is_triple_root(spec, roots)) return "not a third-order recurrence with a triple root";
  if (auto why = p_divides_a_root(roots, p)) return why;
  const BigInt& a = roots.roots()[0].value;
  const auto& x = spec.initials();
  if (!divides(p, x[0])) return "p does not divide x_0 = " + str(x[0]);
  const BigInt d = 4 * a * x[1] - x[2] - 3 * a * a * x[0];
  if (divides(p, d)) return "p divides 4a x_1 - x_2 - 3a^2 x_0 = " + str(d);
  return std::nullopt;
}

inline bool is_two_equal_roots(const RecurrenceSpec& spec, const RootFactorization& roots) {
  if (spec.order() != 3 || roots.distinct() != 2) return false;
  return true;
}

// (a, b) with a the double root.
inline std::pair<BigInt, BigInt> double_and_simple(const RootFactorization& roots) {
  const auto& rs = roots.roots();
  return rs[0].multiplicity == 2 ? std::pair{rs[0].value, rs[1].value} : std::pair{rs[1].value, rs[0].value};
}

inline std::optional<std::string> fails_two_equal_roots(const RecurrenceSpec& spec, const RootFactorization& roots,
                                                        Prime p) {
  if (!is_two_equal_roots(spec, roots)) return "not a third-order recurrence with roots a, a, b (a != b)";
  if (auto why = p_divides_a_root(roots, p)) return why;
  const auto [a, b] = double_and_simple(roots);
  const auto& x = spec.initials();
  if (!divides(p, x[0])) return "p does not divide x_0 = " + str(x[0]);
  const BigInt d = (a - b) * (x[2] - x[1] * (a + b) + x[0] * a * b);
  if (divides(p, d)) return "p divides (a - b)(x_2 - x_1(a + b) + x_0 ab) = " + str(d);
  return std::nullopt;
}

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::optional<std::string> fails_binomial(const RecurrenceSpec& spec, Prime p) {
  if (spec.order() != p.value()) {
    return "the order " + std::to_string(spec.order()) + " is not p = " + std::to_string(p.value());
  }
  const auto& b = spec.coeffs();
  if (!divides(p, b[0])) return "b_1 = " + str(b[0]) + " is not p times an integer";
  const BigInt a = b[0] / p.big();
  BigInt apow = 1;
  for (std::size_t i = 1; i <= b.size(); ++i) {
    apow *= a;
    const BigInt expected = (i % 2 == 1 ? 1 : -1) * binomial(p.value(), i) * apow;
    if (b[i - 1] != expected) {
      return "b_" + std::to_string(i) + " = " + str(b[i - 1]) + " breaks the binomial pattern (expected " +
             str(expected) + " for a = " + str(a) + ")";
    }
  }
  const auto& x = spec.initials();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) return "x_" + std::to_string(i) + " = 0";
  }
  const std::int64_t v0 = split_prime_power(x[0], p).first;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (split_prime_power(x[i], p).first != v0) return "the initial values do not share one p-adic valuation";
  }
  return std::nullopt;
}

}  // namespace detail

/// Applies the rules in fixed priority order. Pure: no analytic work.
inline RuleMatch detect_rule(const RecurrenceSpec& spec, const RootFactorization& roots, Prime p) {
  if (!validate_factorization(spec, roots)) {
    throw InvalidSpec("roots do not factor the characteristic polynomial", InvalidSpec::Kind::invalid_roots);
  }
  using detail::str;
  std::vector<std::string> failures;

  auto why1 = detail::fails_distinct_roots(spec, roots, p);
  if (!why1) {
    return {Outcome::dense_certified, TheoremTag::distinct_roots,
            "distinct pairwise coprime roots of absolute value >= 2, p divides none of them, x_0 = 0"};
  }
  failures.push_back("distinct roots: " + *why1);

  auto why2 = detail::fails_double_root(spec, roots, p);
  if (!why2) {
    return {Outcome::dense_certified, TheoremTag::double_root,
            "exactly one double root, initial values (0, ..., 0, 1), p divides no root, roots distinct mod p"};
  }
  failures.push_back("one double root: " + *why2);

  auto why3 = detail::fails_full_multiplicity(spec, roots, p);
  if (!why3) {
    return {Outcome::dense_certified, TheoremTag::full_multiplicity,
            "a single root of multiplicity k, initial values (0, ..., 0, 1), p does not divide it"};
  }
  failures.push_back("single root of multiplicity k: " + *why3);

  if (detail::is_triple_root(spec, roots) && !detail::p_divides_a_root(roots, p)) {
    const BigInt& a = roots.roots()[0].value;
    const auto& x = spec.initials();
    if (x[0] == 0) {
      if (4 * a * x[1] != x[2]) {
        return {Outcome::dense_certified, TheoremTag::triple_root_x0_zero,
                "triple root a, x_0 = 0 and 4a x_1 = " + str(4 * a * x[1]) + " != x_2 = " + str(x[2])};
      }
      if (x[1] == 0) {
        return {Outcome::not_dense, TheoremTag::triple_root_converse,
                "degenerate: x_0 = x_1 = x_2 = 0, so x_n = 0 for all n and the quotient set is empty"};
      }
      return {Outcome::not_dense, TheoremTag::triple_root_converse,
              "triple root a with x_0 = 0 and 4a x_1 = x_2, so x_n = c n^2 a^n and every quotient has even "
              "p-adic valuation"};
    }
  }
  auto why4 = detail::fails_triple_root(spec, roots, p);
  if (!why4) {
    return {Outcome::dense_certified, TheoremTag::triple_root,
            "triple root a, p divides x_0, p does not divide 4a x_1 - x_2 - 3a^2 x_0"};
  }
  failures.push_back("triple root: " + *why4);

  auto why5 = detail::fails_two_equal_roots(spec, roots, p);
  if (!why5) {
    return {Outcome::dense_certified, TheoremTag::two_equal_roots,
            "roots a, a, b, p divides x_0, p does not divide (a - b)(x_2 - x_1(a + b) + x_0 ab)"};
  }
  failures.push_back("roots a, a, b: " + *why5);

  auto why6 = detail::fails_binomial(spec, p);
  if (!why6) {
    return {Outcome::not_dense, TheoremTag::binomial_nondense,
            "order p with binomial coefficients and nonzero initial values of equal valuation; not dense by an "
            "external citation (not proved here)"};
  }
  failures.push_back("binomial order-p pattern: " + *why6);

  std::string reason = "no rule applies:";
  for (const std::string& f : failures) reason += " [" + f + "]";
  return {Outcome::unknown, std::nullopt, reason};
}

namespace detail {

struct CertificateTerm {
  BigRational coefficient;  // already multiplied by scale
  std::uint32_t degree;
  PAdicApprox rate;
};

// log_p((num/den)^(p-1)) with the power taken mod p^w.
inline PAdicApprox log_power_ratio(const BigInt& num, const BigInt& den, Prime p, int w) {
  const BigInt modulus = prime_power(p, w);
  const BigInt base = mod_floor(num * inverse_mod(den, modulus), modulus);
  const BigInt power = boost::multiprecision::powm(base, BigInt(p.value() - 1), modulus);
  return log_p(PAdicApprox::from_residue(p, power, w), w);
}

inline BigInt pow_pm1(std::uint64_t p, std::uint32_t j) { return ipow(BigInt(p - 1), j); }

// Roots in the order each construction expects.
inline RootFactorization canonical_roots(TheoremTag tag, const RootFactorization& roots) {
  std::vector<Root> rs = roots.roots();
  std::sort(rs.begin(), rs.end(), [](const Root& x, const Root& y) { return x.value < y.value; });
  if (tag == TheoremTag::double_root || tag == TheoremTag::two_equal_roots) {
    std::stable_partition(rs.begin(), rs.end(), [](const Root& r) { return r.multiplicity == 2; });
  }
  return RootFactorization(std::move(rs));
}

struct Construction {
  BigInt scale;
  std::vector<CertificateTerm> terms;
  // scale * x_m as a sum over (coefficient, degree, root): scale*c * m^j * a^m,
  // used when the exact term list is too long to iterate.
  std::vector<std::tuple<BigRational, std::uint32_t, BigInt>> closed_form;
};

inline Construction construct(TheoremTag tag, const RecurrenceSpec& spec, const RootFactorization& input_roots,
                              Prime p, int w) {
  const RootFactorization roots = canonical_roots(tag, input_roots);
  const std::uint64_t pv = p.value();
  Construction out;
  const auto& x = spec.initials();

  if (tag == TheoremTag::triple_root || tag == TheoremTag::triple_root_x0_zero) {
    const BigInt& a = roots.roots()[0].value;
    out.scale = 2 * a * a;
    const BigRational c0(x[0]);
    const BigRational c1 = make_rational(4 * a * x[1] - x[2] - 3 * a * a * x[0], out.scale);
    const BigRational c2 = make_rational(x[2] - 2 * a * x[1] + a * a * x[0], out.scale);
    const PAdicApprox lambda = log_power_ratio(a, 1, p, w);
    const BigRational s(out.scale);
    out.terms = {{s * c0, 0, lambda}, {s * c1 * BigRational(pow_pm1(pv, 1)), 1, lambda},
                 {s * c2 * BigRational(pow_pm1(pv, 2)), 2, lambda}};
    out.closed_form = {{s * c0, 0, a}, {s * c1, 1, a}, {s * c2, 2, a}};
    return out;
  }

  if (tag == TheoremTag::two_equal_roots) {
    const auto [a, b] = double_and_simple(roots);
    out.scale = 1;
    const BigInt d2 = (b - a) * (b - a);
    const BigRational c0 = make_rational(b * b * x[0] - 2 * a * b * x[0] - x[2] + 2 * a * x[1], d2);
    const BigRational c1 = make_rational(x[2] - x[1] * (a + b) + x[0] * a * b, a * (a - b));
    const BigRational c2 = make_rational(x[2] - 2 * a * x[1] + a * a * x[0], d2);
    const PAdicApprox lambda = log_power_ratio(a, 1, p, w);
    const PAdicApprox mu = log_power_ratio(b, a, p, w);
    out.terms = {{c0, 0, lambda}, {c1 * BigRational(pow_pm1(pv, 1)), 1, lambda}, {c2, 0, add(lambda, mu)}};
    out.closed_form = {{c0, 0, a}, {c1, 1, a}, {c2, 0, b}};
    return out;
  }

  const ClosedForm cf = solve_closed_form(spec, roots);
  out.scale = cf.det;
  const BigRational s(cf.det);
  const auto& rs = roots.roots();
  const PAdicApprox lambda1 = log_power_ratio(rs[0].value, 1, p, w);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    PAdicApprox rate = lambda1;
    if (i > 0) {
      rate = tag == TheoremTag::double_root ? add(lambda1, log_power_ratio(rs[i].value, rs[0].value, p, w))
                                            : log_power_ratio(rs[i].value, 1, p, w);
    }
    for (std::uint32_t j = 0; j < rs[i].multiplicity; ++j) {
      const BigRational c = s * cf.polynomials[i][j];
      out.terms.push_back({c * BigRational(pow_pm1(pv, j)), j, rate});
      out.closed_form.emplace_back(c, j, rs[i].value);
    }
  }
  return out;
}

inline constexpr std::uint64_t kIterateSampleLimit = 2'000'000;

// scale * x_{n(p-1)} mod p^N for n = 0..20.
inline std::vector<BigInt> scaled_samples(const RecurrenceSpec& spec, const Construction& c, Prime p, int N) {
  const BigInt modulus = prime_power(p, N);
  const std::uint64_t step = p.value() - 1;
  const std::uint64_t last = step * (kIdentitySamples - 1);
  std::vector<BigInt> out;
  if (last <= kIterateSampleLimit) {
    const std::vector<BigInt> residues = residues_mod(spec, modulus, last);
    for (int n = 0; n < kIdentitySamples; ++n) {
      out.push_back(mod_floor(c.scale * residues[static_cast<std::size_t>(n) * step], modulus));
    }
    return out;
  }
  for (int n = 0; n < kIdentitySamples; ++n) {
    const BigInt m = BigInt(static_cast<std::uint64_t>(n) * step);
    BigInt sum = 0;
    for (const auto& [coef, j, a] : c.closed_form) {
      const BigInt unit = mod_floor(boost::multiprecision::numerator(coef) *
                                        inverse_mod(boost::multiprecision::denominator(coef), modulus),
                                    modulus);
      const BigInt mj = boost::multiprecision::powm(m, BigInt(j), modulus);
      const BigInt am = boost::multiprecision::powm(mod_floor(a, modulus), m, modulus);
      sum += unit * mj * am;
    }
    out.push_back(mod_floor(sum, modulus));
  }
  return out;
}

}  // namespace detail

/// Builds the analytic certificate for a rule that reported DenseCertified.
/// Throws DomainError when p = 2 and some rate falls outside the disc of
/// convergence, PreconditionFailure when f has no certifiable simple zero.
inline Certificate build_certificate(const RecurrenceSpec& spec, const RootFactorization& roots, Prime p,
                                     int N = kDefaultPrecision) {
  if (N < 1) throw DomainError("precision must be at least 1");
  const RuleMatch rule = detect_rule(spec, roots, p);
  if (rule.outcome != Outcome::dense_certified) {
    throw PreconditionFailure("no certificate: the verdict is " + to_string(rule.outcome));
  }
  const TheoremTag tag = *rule.tag;

  for (int w = N + kSeriesGuard;; w = 2 * w - kSeriesGuard) {
    const detail::Construction c = detail::construct(tag, spec, roots, p, w);
    std::vector<ExpTerm> terms;
    for (const auto& t : c.terms) terms.push_back({embed(t.coefficient, p, w), t.degree, t.rate});
    Certificate cert{ExponentialPolynomial(p, std::move(terms)), c.scale, Valuation(0), Valuation(0),
                     std::nullopt, {}, N};

    const std::vector<BigInt> expected = detail::scaled_samples(spec, c, p, N);
    for (int n = 0; n < kIdentitySamples; ++n) {
      const PAdicApprox fn = eval(cert.f, embed(n, p, w), w);
      cert.identity_samples.push_back({static_cast<std::uint64_t>(n), fn.residue(N) == expected[static_cast<std::size_t>(n)]});
    }
    for (const IdentitySample& s : cert.identity_samples) {
      if (!s.match) {
        throw InternalError("certificate identity f(n) = scale * x_{n(p-1)} fails mod p^" + std::to_string(N) +
                            " at n = " + std::to_string(s.n));
      }
    }

    const PAdicApprox zero = PAdicApprox::exact_zero(p);
    const PAdicApprox f0 = eval(cert.f, zero, w);
    const PAdicApprox d0 = eval(derivative(cert.f), zero, w);
    if (!d0.is_nonzero()) {
      if (w >= 4 * N + kSeriesGuard) {
        throw PreconditionFailure("f'(0) vanishes to " + d0.valuation_lower_bound().to_string() +
                                  " digits; no simple zero can be certified");
      }
      continue;
    }
    cert.f0_valuation = f0.is_exact_zero() ? Valuation::infinity() : f0.valuation();
    cert.fprime0_valuation = d0.valuation();

    if (cert.f0_valuation.is_infinite()) return cert;  // 0 is a simple zero
    if (cert.f0_valuation < Valuation(1)) {
      throw PreconditionFailure("f(0) is a p-adic unit (nu_p(f(0)) = 0); no zero near 0");
    }
    if (cert.fprime0_valuation != Valuation(0)) {
      throw PreconditionFailure("f(0) != 0 and f'(0) is not a unit (nu_p(f'(0)) = " +
                                cert.fprime0_valuation.to_string() + ")");
    }
    cert.hensel_root = hensel_lift(cert.f, zero, N).root;
    return cert;
  }
}

/// Re-derives everything from (spec, roots, p) and the certificate's own
/// precision and checks each field; also re-checks the analytic claims on
/// the stored f directly. Never throws.
inline bool verify(const Certificate& cert, const RecurrenceSpec& spec, const RootFactorization& roots, Prime p) {
  try {
    if (cert.precision < 1 || cert.f.prime() != p) return false;
    if (cert.identity_samples.size() != kIdentitySamples) return false;
    for (std::size_t i = 0; i < cert.identity_samples.size(); ++i) {
      if (cert.identity_samples[i].n != i || !cert.identity_samples[i].match) return false;
    }
    const Certificate rebuilt = build_certificate(spec, roots, p, cert.precision);
    if (!(rebuilt == cert)) return false;

    const int w = cert.precision + kSeriesGuard;
    const PAdicApprox zero = PAdicApprox::exact_zero(p);
    const PAdicApprox f0 = eval(cert.f, zero, w);
    const Valuation v0 = f0.is_exact_zero() ? Valuation::infinity() : f0.valuation();
    if (v0 != cert.f0_valuation) return false;
    const PAdicApprox d0 = eval(derivative(cert.f), zero, 4 * cert.precision + kSeriesGuard);
    if (!d0.is_nonzero() || d0.valuation() != cert.fprime0_valuation) return false;

    if (v0.is_infinite()) return !cert.hensel_root.has_value();
    if (!cert.hensel_root || cert.fprime0_valuation != Valuation(0) || v0 < Valuation(1)) return false;
    const PAdicApprox& root = *cert.hensel_root;
    if (root.valuation_lower_bound() < v0) return false;
    return eval(cert.f, root, w).residue(cert.precision) == 0;
  } catch (const Error&) {
    return false;
  }
}

inline constexpr const char* kUnsupportedAtTwo = "certificate unsupported at p=2";

inline Verdict classify(const RecurrenceSpec& spec, const RootFactorization& roots, Prime p,
                        int N = kDefaultPrecision) {
  const RuleMatch rule = detect_rule(spec, roots, p);
  Verdict v{rule.outcome, rule.tag, std::nullopt, rule.reason, {}};
  if (rule.outcome != Outcome::dense_certified) return v;
  try {
    v.certificate = build_certificate(spec, roots, p, N);
  } catch (const DomainError& e) {
    if (!p.is_two()) throw;
    v.notes.push_back(std::string(kUnsupportedAtTwo) + ": " + e.what());
  }
  return v;
}

/// Classifies using integer roots found by the rational root theorem.
inline Verdict classify(const RecurrenceSpec& spec, Prime p, int N = kDefaultPrecision) {
  const auto roots = find_integer_roots(spec);
  if (!roots) {
    return {Outcome::unknown, std::nullopt, std::nullopt,
            "no integer factorization of the characteristic polynomial", {}};
  }
  Verdict v = classify(spec, *roots, p, N);
  v.notes.push_back("roots found by rational root scan");
  return v;
}

}  // namespace pqs
