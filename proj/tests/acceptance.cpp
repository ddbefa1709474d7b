// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Each criterion is checked as stated; nothing is relaxed to make it pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pqs/pqs.hpp"

namespace {

using namespace pqs;

std::mt19937_64 rng(20261019);

long long uniform(long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(rng); }

std::vector<BigInt> ints(std::initializer_list<long long> xs) {
  std::vector<BigInt> out;
  for (const long long x : xs) out.emplace_back(x);
  return out;
}

// b_1..b_k of prod (x - a) over a multiset of roots.
std::vector<BigInt> coeffs_from_roots(const std::vector<long long>& multiset) {
  std::vector<BigInt> low{1};
  for (const long long a : multiset) {
    std::vector<BigInt> next(low.size() + 1, 0);
    for (std::size_t i = 0; i < low.size(); ++i) {
      next[i + 1] += low[i];
      next[i] -= BigInt(a) * low[i];
    }
    low = std::move(next);
  }
  std::vector<BigInt> b;
  for (std::size_t i = 1; i <= multiset.size(); ++i) b.push_back(-low[multiset.size() - i]);
  return b;
}

std::vector<long long> distinct_nonzero(std::size_t count, long long bound) {
  std::set<long long> used;
  std::vector<long long> out;
  while (out.size() < count) {
    const long long a = uniform(-bound, bound);
    if (a != 0 && used.insert(a).second) out.push_back(a);
  }
  return out;
}

struct Check {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Check exp_log_round_trip() {
  const auto t0 = std::chrono::steady_clock::now();
  int failures = 0, total = 0;
  for (const std::uint64_t pv : {3u, 5u, 7u, 11u, 13u}) {
    const Prime p(pv);
    for (int i = 0; i < 200; ++i) {
      // z = 1 + p * u / v with v prime to p.
      BigInt u = uniform(-1'000'000'000'000LL, 1'000'000'000'000LL);
      BigInt v = uniform(1, 1'000'000);
      while (v % pv == 0) v += 1;
      const PAdicApprox z = embed(make_rational(v + BigInt(pv) * u, v), p, kDefaultPrecision);
      const PAdicApprox back = exp_p(log_p(z, kDefaultPrecision), kDefaultPrecision);
      ++total;
      if (back.residue(kDefaultPrecision) != z.residue(kDefaultPrecision)) ++failures;
    }
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream d;
  d << total - failures << "/" << total << " round trips exact mod p^32, " << elapsed << " s";
  return {failures == 0 && elapsed < 2.0, d.str()};
}

Check core_identity() {
  struct Case {
    const char* name;
    RecurrenceSpec spec;
    RootFactorization roots;
    Prime p;
  };
  const Case cases[] = {
      {"roots 2,3,5 at p=7", RecurrenceSpec(coeffs_from_roots({2, 3, 5}), ints({0, 1, 0})),
       RootFactorization({{BigInt(2), 1}, {BigInt(3), 1}, {BigInt(5), 1}}), Prime(7)},
      {"b=(4,-5,2) at p=7", RecurrenceSpec(ints({4, -5, 2}), ints({0, 0, 1})),
       RootFactorization({{BigInt(1), 2}, {BigInt(2), 1}}), Prime(7)},
      {"(x-3)^2 at p=5", RecurrenceSpec(coeffs_from_roots({3, 3}), ints({0, 1})), RootFactorization({{BigInt(3), 2}}),
       Prime(5)},
  };
  int mismatches = 0;
  std::ostringstream d;
  for (const Case& c : cases) {
    const Certificate cert = build_certificate(c.spec, c.roots, c.p, kDefaultPrecision);
    const BigInt modulus = prime_power(c.p, kDefaultPrecision);
    const std::vector<BigInt> x = terms(c.spec, 20 * (c.p.value() - 1));
    int local = 0;
    for (std::uint64_t n = 0; n <= 20; ++n) {
      const BigInt lhs = eval(cert.f, embed(BigInt(n), c.p, kDefaultPrecision + 8), kDefaultPrecision + 8)
                             .residue(kDefaultPrecision);
      const BigInt rhs = mod_floor(cert.scale * x[n * (c.p.value() - 1)], modulus);
      if (lhs != rhs) ++local;
    }
    for (const IdentitySample& s : cert.identity_samples) {
      if (!s.match) ++local;
    }
    mismatches += local;
    d << c.name << ": " << local << " mismatches; ";
  }
  return {mismatches == 0, d.str()};
}

Check determinant_identities() {
  std::set<std::size_t> bad_k;
  int double_fail = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto k = static_cast<std::size_t>(uniform(3, 6));
    const auto a = distinct_nonzero(k - 1, 9);
    std::vector<Root> rs{{BigInt(a[0]), 2}};
    std::vector<long long> multiset{a[0], a[0]};
    for (std::size_t i = 1; i < a.size(); ++i) {
      rs.push_back({BigInt(a[i]), 1});
      multiset.push_back(a[i]);
    }
    std::vector<BigInt> x0(k, 0);
    x0.back() = 1;
    const ClosedForm cf = solve_closed_form(RecurrenceSpec(coeffs_from_roots(multiset), x0), RootFactorization(rs));
    BigInt product = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = i + 1; j < a.size(); ++j) product *= BigInt(a[i] - a[j]);
    }
    const BigRational stated((k + 1) % 2 == 0 ? product : BigInt(-product));
    if (BigRational(cf.det) * cf.coefficients[1] != stated) {
      ++double_fail;
      bad_k.insert(k);
    }
  }
  int full_fail = 0;
  for (std::uint32_t k = 2; k <= 8; ++k) {
    for (long long a = -5; a <= 5; ++a) {
      if (a == 0) continue;
      std::vector<BigInt> x0(k, 0);
      x0.back() = 1;
      const ClosedForm cf = solve_closed_form(RecurrenceSpec(coeffs_from_roots(std::vector<long long>(k, a)), x0),
                                              RootFactorization({{BigInt(a), k}}));
      if (cf.coefficients[1] != make_rational(k % 2 == 0 ? 1 : -1, ipow(BigInt(a), k - 1) * (k - 1))) ++full_fail;
    }
  }
  std::ostringstream d;
  d << "det(A)c1 = (-1)^(k+1) prod(a_i - a_j): " << 50 - double_fail << "/50";
  if (!bad_k.empty()) {
    d << " (fails for k =";
    for (const std::size_t k : bad_k) d << " " << k;
    d << ")";
  }
  d << "; c1 = (-1)^k / (a^(k-1)(k-1)): " << 70 - full_fail << "/70";
  return {double_fail == 0 && full_fail == 0, d.str()};
}

Check classifier_golden() {
  struct Case {
    const char* name;
    RecurrenceSpec spec;
    RootFactorization roots;
    Prime p;
    pqs::Outcome expected;
    std::function<bool(const std::optional<TheoremTag>&)> tag_ok;
  };
  auto is = [](TheoremTag t) { return [t](const std::optional<TheoremTag>& got) { return got == t; }; };
  const Case cases[] = {
      {"x0=0 roots 2,3,5 p=7", RecurrenceSpec(coeffs_from_roots({2, 3, 5}), ints({0, 1, 0})),
       RootFactorization({{BigInt(2), 1}, {BigInt(3), 1}, {BigInt(5), 1}}), Prime(7), pqs::Outcome::dense_certified,
       is(TheoremTag::distinct_roots)},
      {"4a,-5a^2,2a^3 a=1 p=7", RecurrenceSpec(ints({4, -5, 2}), ints({0, 0, 1})),
       RootFactorization({{BigInt(1), 2}, {BigInt(2), 1}}), Prime(7), pqs::Outcome::dense_certified,
       is(TheoremTag::double_root)},
      {"triple root a=2 x=(0,1,3) p=5", RecurrenceSpec(coeffs_from_roots({2, 2, 2}), ints({0, 1, 3})),
       RootFactorization({{BigInt(2), 3}}), Prime(5), pqs::Outcome::dense_certified,
       [](const std::optional<TheoremTag>& t) {
         return t == TheoremTag::triple_root || t == TheoremTag::triple_root_x0_zero;
       }},
      {"b=(3,-3,1) x=(0,1,4) p=3", RecurrenceSpec(ints({3, -3, 1}), ints({0, 1, 4})), RootFactorization({{BigInt(1), 3}}),
       Prime(3), pqs::Outcome::not_dense, [](const std::optional<TheoremTag>&) { return true; }},
      {"binomial p=3 a=2 x=(1,1,1)", RecurrenceSpec(ints({6, -12, 8}), ints({1, 1, 1})),
       RootFactorization({{BigInt(2), 3}}), Prime(3), pqs::Outcome::not_dense, is(TheoremTag::binomial_nondense)},
  };
  bool ok = true;
  std::ostringstream d;
  for (const Case& c : cases) {
    const Verdict v = classify(c.spec, c.roots, c.p);
    const bool good = v.outcome == c.expected && c.tag_ok(v.tag) &&
                      (v.outcome != pqs::Outcome::dense_certified ||
                       (v.certificate && verify(*v.certificate, c.spec, c.roots, c.p)));
    ok = ok && good;
    d << c.name << " -> " << to_string(v.outcome) << (v.tag ? " " + to_string(*v.tag) : "") << (good ? "" : " [WRONG]")
      << "; ";
  }
  return {ok, d.str()};
}

Check converse_parity() {
  const auto t0 = std::chrono::steady_clock::now();
  const RecurrenceSpec squares(ints({3, -3, 1}), ints({0, 1, 4}));
  const SpectrumReport s = valuation_spectrum(squares, Prime(3), 500);
  bool all_even = !s.valuations.empty();
  for (const auto& [v, w] : s.valuations) all_even = all_even && v % 2 == 0;
  const ProbeReport r = probe_target(squares, Prime(3), BigRational(3), 1, 500);
  const double elapsed = seconds_since(t0);
  std::ostringstream d;
  d << s.valuations.size() << " valuations, all even: " << (all_even ? "yes" : "no")
    << "; probe target 3 (valuation 1): " << (r.hit ? "hit" : "no hit") << " after " << r.pairs_searched
    << " pairs; " << elapsed << " s";
  return {all_even && !r.hit && elapsed < 10.0, d.str()};
}

ExponentialPolynomial random_exponential_polynomial(Prime p) {
  const long long pv = static_cast<long long>(p.value());
  std::vector<ExpTerm> terms;
  const auto count = uniform(1, 4);
  for (int i = 0; i < count; ++i) {
    PAdicApprox rate = uniform(0, 1) ? embed(BigInt(pv * uniform(-50, 50)), p, 40)
                                     : log_p(embed(BigInt(1 + pv * uniform(1, 1000)), p, 40), 40);
    terms.push_back({embed(BigInt(uniform(-1000, 1000)), p, 40), static_cast<std::uint32_t>(uniform(0, 3)), rate});
  }
  return ExponentialPolynomial(p, std::move(terms));
}

// Strict ||b - b0|| < ||f(b0)||, i.e. nu(b - b0) > nu(f(b0)).
bool strictly_closer(const PAdicApprox& root, const PAdicApprox& b0, const PAdicApprox& fb0) {
  if (!fb0.is_nonzero()) return true;  // f(b0) = 0: b = b0 and the bound is vacuous
  const PAdicApprox moved = sub(root, b0);
  return moved.valuation_lower_bound() > fb0.valuation();
}

Check hensel() {
  constexpr int N = kDefaultPrecision;
  const Prime p5(5);
  const PAdicApprox zero = PAdicApprox::exact_zero(p5);
  const ExponentialPolynomial sq(p5, {{embed(BigInt(1), p5, N), 2, zero}, {embed(BigInt(-6), p5, N), 0, zero}});
  const PAdicApprox b0 = embed(BigInt(1), p5, N);
  const HenselLift lift = hensel_lift(sq, b0, N);
  const bool root_ok = lift.root.residue(2) == 16 && eval(sq, lift.root, N + 8).residue(N) == 0;
  const bool strict_ok = strictly_closer(lift.root, b0, eval(sq, b0, N + 8));

  int fuzzed = 0, zero_ok = 0, strict_fuzz = 0;
  while (fuzzed < 100) {
    const Prime p{std::vector<std::uint64_t>{3, 5, 7, 11}[static_cast<std::size_t>(uniform(0, 3))]};
    const long long pv = static_cast<long long>(p.value());
    const ExponentialPolynomial g = random_exponential_polynomial(p);
    const PAdicApprox start = embed(BigInt(uniform(-100, 100)), p, N);
    const BigInt g0 = eval(g, start, N + 8).residue(1);
    std::vector<ExpTerm> terms = g.terms();
    terms.push_back({embed(BigInt(-g0 + pv * uniform(-20, 20)), p, 40), 0, PAdicApprox::exact_zero(p)});
    const ExponentialPolynomial f(p, std::move(terms));
    const PAdicApprox d = eval(derivative(f), start, N + 8);
    if (!d.is_nonzero() || d.valuation() != Valuation(0)) continue;
    ++fuzzed;
    const HenselLift l = hensel_lift(f, start, N);
    if (eval(f, l.root, N + 8).residue(N) == 0) ++zero_ok;
    if (strictly_closer(l.root, start, eval(f, start, N + 8))) ++strict_fuzz;
  }
  std::ostringstream d;
  d << "z^2-6 root = " << lift.root.residue(2) << " mod 25, f(root) = 0 mod 5^32: " << (root_ok ? "yes" : "no")
    << ", ||b-b0|| < ||f(b0)||: " << (strict_ok ? "yes" : "no") << "; fuzz: f(b) = 0 in " << zero_ok
    << "/100, strict bound in " << strict_fuzz << "/100";
  return {root_ok && strict_ok && zero_ok == 100 && strict_fuzz == 100, d.str()};
}

Check closed_form_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  int failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto distinct = distinct_nonzero(static_cast<std::size_t>(uniform(1, 4)), 9);
    std::vector<Root> rs;
    std::vector<long long> multiset;
    for (const long long a : distinct) {
      if (multiset.size() >= 6) break;
      const auto m = static_cast<std::uint32_t>(uniform(1, 3));
      rs.push_back({BigInt(a), m});
      for (std::uint32_t i = 0; i < m; ++i) multiset.push_back(a);
    }
    if (multiset.size() < 2) {
      rs[0].multiplicity += 1;
      multiset.push_back(distinct[0]);
    }
    std::vector<BigInt> x;
    for (std::size_t i = 0; i < multiset.size(); ++i) x.emplace_back(uniform(-1000, 1000));
    const RecurrenceSpec s(coeffs_from_roots(multiset), x);
    const ClosedForm cf = solve_closed_form(s, RootFactorization(rs));
    for (std::uint64_t n = 0; n <= 200; ++n) {
      if (eval_closed_form(cf, n) != BigRational(term(s, n))) {
        ++failures;
        break;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream d;
  d << 100 - failures << "/100 specs agree for n <= 200, " << elapsed << " s";
  return {failures == 0 && elapsed < 5.0, d.str()};
}

Check fibonacci_coverage() {
  const RecurrenceSpec fib(ints({1, 1}), ints({0, 1}));
  bool ok = true;
  std::ostringstream d;
  for (const std::uint64_t p : {2u, 3u, 7u}) {
    const CoverageReport r = residue_coverage(fib, Prime(p), 2, 300);
    ok = ok && r.fraction == 1.0;
    d << "p=" << p << ": " << r.attained << "/" << r.total << "; ";
  }
  return {ok, d.str()};
}

// One random single-leaf mutation of a JSON tree.
void mutate(Json& j) {
  std::vector<Json*> leaves;
  std::function<void(Json&)> collect = [&](Json& node) {
    if (node.is_object() || node.is_array()) {
      for (auto& child : node) collect(child);
    } else if (node.is_boolean() || node.is_null()) {
      leaves.push_back(&node);
    } else if (node.is_string()) {
      // Only numeric leaves; tags such as "kind" are not data fields.
      const std::string s = node.get<std::string>();
      const std::string digits = s.substr(0, s.find('/'));
      if (s == "inf" || (!digits.empty() && digits.find_first_not_of("-0123456789") == std::string::npos)) {
        leaves.push_back(&node);
      }
    }
  };
  collect(j);
  Json& leaf = *leaves[static_cast<std::size_t>(uniform(0, static_cast<long long>(leaves.size()) - 1))];
  if (leaf.is_boolean()) {
    leaf = !leaf.get<bool>();
  } else if (leaf.is_null()) {
    leaf = "1";
  } else {
    const std::string s = leaf.get<std::string>();
    const auto slash = s.find('/');
    if (s == "inf") {
      leaf = "0";
    } else if (slash != std::string::npos) {
      leaf = to_string(parse_bigint(s.substr(0, slash)) + 1) + s.substr(slash);
    } else {
      leaf = to_string(parse_bigint(s) + uniform(1, 3));
    }
  }
}

Check certificate_bijection() {
  struct Case {
    RecurrenceSpec spec;
    RootFactorization roots;
    Prime p;
  };
  const std::vector<Case> cases = {
      {RecurrenceSpec(coeffs_from_roots({2, 3, 5}), ints({0, 1, 0})),
       RootFactorization({{BigInt(2), 1}, {BigInt(3), 1}, {BigInt(5), 1}}), Prime(7)},
      {RecurrenceSpec(ints({4, -5, 2}), ints({0, 0, 1})), RootFactorization({{BigInt(1), 2}, {BigInt(2), 1}}), Prime(7)},
      {RecurrenceSpec(coeffs_from_roots({3, 3}), ints({0, 1})), RootFactorization({{BigInt(3), 2}}), Prime(5)},
      {RecurrenceSpec(ints({3, -3, 1}), ints({5, 1, 0})), RootFactorization({{BigInt(1), 3}}), Prime(5)},
      {RecurrenceSpec(coeffs_from_roots({1, 1, 3}), ints({5, 1, 7})), RootFactorization({{BigInt(1), 2}, {BigInt(3), 1}}),
       Prime(5)},
  };
  std::vector<Certificate> certs;
  for (const Case& c : cases) certs.push_back(build_certificate(c.spec, c.roots, c.p, kDefaultPrecision));

  int accepted_own = 0, cross_rejected = 0, cross_total = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Certificate reread = decode<Certificate>(Json::parse(encode(certs[i]).dump()));
    if (reread == certs[i] && verify(reread, cases[i].spec, cases[i].roots, cases[i].p)) ++accepted_own;
    for (std::size_t j = 0; j < cases.size(); ++j) {
      if (i == j) continue;
      ++cross_total;
      if (!verify(certs[j], cases[i].spec, cases[i].roots, cases[i].p)) ++cross_rejected;
    }
  }

  int rejected = 0;
  for (int m = 0; m < 200; ++m) {
    const std::size_t i = static_cast<std::size_t>(m) % cases.size();
    Json j = encode(certs[i]);
    mutate(j);
    try {
      const Certificate tampered = decode<Certificate>(j);
      if (!verify(tampered, cases[i].spec, cases[i].roots, cases[i].p)) ++rejected;
    } catch (const Error&) {
      ++rejected;  // not even a well-formed certificate
    }
  }
  std::ostringstream d;
  d << "untampered accepted " << accepted_own << "/" << cases.size() << ", foreign rejected " << cross_rejected << "/"
    << cross_total << ", single-field tampers rejected " << rejected << "/200";
  return {accepted_own == static_cast<int>(cases.size()) && cross_rejected == cross_total && rejected == 200, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"exp/log round trip", exp_log_round_trip},
      {"f(n) = scale * x_{n(p-1)} identity", core_identity},
      {"determinant and coefficient identities", determinant_identities},
      {"classifier golden set", classifier_golden},
      {"converse parity for n^2", converse_parity},
      {"Hensel correctness", hensel},
      {"closed form equals recurrence", closed_form_equivalence},
      {"Fibonacci residue coverage", fibonacci_coverage},
      {"certificate verify bijection and tamper rejection", certificate_bijection},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
