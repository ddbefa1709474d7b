#pragma once

// Empirical exploration of the quotient set {x_m / x_n : x_n != 0}: searching
// for quotients p-adically close to a target, the set of valuations the
// quotients realize, and which unit residue classes their unit parts hit.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pqs/bigint.hpp"
#include "pqs/error.hpp"
#include "pqs/padic_core.hpp"
#include "pqs/recurrence.hpp"

namespace pqs {

inline constexpr std::uint64_t kDefaultBound = 1000;
inline constexpr int kProbeGuardDigits = 8;  // extra digits kept for the modular prefilter

struct ProbeOptions {
  unsigned workers = 1;  ///< threads used by probe_target; results do not depend on it
};

/// Pairs (m, n) with max(m, n) = s, in canonical order: (j, s) then (s, j)
/// for j = 0..s-1, then (s, s). Shells are visited in increasing s, so the
/// order is by max(m, n), then m + n, then m, and extending the bound only
/// appends pairs.
template <class Visit>
bool for_each_pair_in_shell(std::uint64_t s, Visit&& visit) {
  for (std::uint64_t j = 0; j < s; ++j) {
    if (!visit(j, s)) return false;
    if (!visit(s, j)) return false;
  }
  return visit(s, s);
}

struct ProbeHit {
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  Valuation achieved;  ///< nu_p(x_m / x_n - target)

  friend bool operator==(const ProbeHit&, const ProbeHit&) = default;
};

struct ProbeReport {
  BigRational target;
  int k = 1;
  std::optional<ProbeHit> hit;
  std::uint64_t pairs_searched = 0;
  std::uint64_t bound = 0;

  friend bool operator==(const ProbeReport&, const ProbeReport&) = default;
};

struct SpectrumWitness {
  std::uint64_t m = 0;
  std::uint64_t n = 0;

  friend bool operator==(const SpectrumWitness&, const SpectrumWitness&) = default;
};

struct SpectrumReport {
  std::map<std::int64_t, SpectrumWitness> valuations;  ///< each achieved nu_p(x_m / x_n) and its first pair
  std::uint64_t bound = 0;
  std::int64_t gcd = 0;  ///< gcd of all achieved valuations (0 when only 0 occurs)
  bool all_even = true;
  std::string parity;

  friend bool operator==(const SpectrumReport&, const SpectrumReport&) = default;
};

struct CoverageReport {
  int k = 1;
  std::uint64_t bound = 0;
  std::uint64_t attained = 0;
  std::uint64_t total = 0;  ///< phi(p^k)
  double fraction = 0.0;
  std::vector<std::uint64_t> missing;  ///< unit classes mod p^k never attained

  friend bool operator==(const CoverageReport&, const CoverageReport&) = default;
};

/// Exact valuation of x_m / x_n - num/den, from the cross-multiplied
/// numerator: nu(x_m den - num x_n) - nu(x_n den).
inline Valuation quotient_distance(const BigInt& xm, const BigInt& xn, const BigRational& target, Prime p) {
  const BigInt& num = boost::multiprecision::numerator(target);
  const BigInt& den = boost::multiprecision::denominator(target);
  const BigInt top = xm * den - num * xn;
  if (top == 0) return Valuation::infinity();
  return Valuation(split_prime_power(top, p).first - split_prime_power(xn * den, p).first);
}

namespace detail {

struct TermTable {
  std::vector<BigInt> exact;
  std::vector<std::optional<std::int64_t>> valuation;  // nullopt for a zero term
  std::vector<BigInt> unit;                            // unit part mod p^digits
};

inline TermTable term_table(const RecurrenceSpec& spec, Prime p, std::uint64_t bound, int digits) {
  TermTable t;
  t.exact = terms(spec, bound);
  const BigInt modulus = prime_power(p, digits);
  for (const BigInt& x : t.exact) {
    if (x == 0) {
      t.valuation.emplace_back();
      t.unit.emplace_back(0);
      continue;
    }
    auto [v, u] = split_prime_power(x, p);
    t.valuation.emplace_back(v);
    t.unit.push_back(mod_floor(u, modulus));
  }
  return t;
}

struct ShellResult {
  std::optional<ProbeHit> hit;
  std::uint64_t pairs = 0;  // pairs examined, up to and including the hit
};

}  // namespace detail

/// First pair in canonical order with nu_p(x_m / x_n - target) > k, i.e.
/// x_m / x_n inside the open disc of radius p^-k around the target. Pairs
/// with m = n or x_n = 0 are skipped.
inline ProbeReport probe_target(const RecurrenceSpec& spec, Prime p, const BigRational& target, int k,
                                std::uint64_t bound = kDefaultBound, ProbeOptions options = {}) {
  if (k < 1) throw DomainError("precision k must be at least 1");
  if (bound < 1) throw DomainError("bound must be at least 1");

  const BigInt& num = boost::multiprecision::numerator(target);
  const BigInt& den = boost::multiprecision::denominator(target);
  const std::int64_t den_val = split_prime_power(den, p).first;
  // Residues mod p^L decide x_m den = num x_n (mod p^t) exactly whenever t <= L.
  const int digits = k + kProbeGuardDigits + static_cast<int>(den_val);
  const BigInt modulus = prime_power(p, digits);
  const detail::TermTable table = detail::term_table(spec, p, bound, digits);
  std::vector<BigInt> residue;
  for (const BigInt& x : table.exact) residue.push_back(mod_floor(x, modulus));
  const BigInt den_mod = mod_floor(den, modulus), num_mod = mod_floor(num, modulus);

  auto scan_shell = [&](std::uint64_t s) {
    detail::ShellResult r;
    for_each_pair_in_shell(s, [&](std::uint64_t m, std::uint64_t n) {
      if (m == n || !table.valuation[n]) return true;
      ++r.pairs;
      // Hit iff nu(x_m den - num x_n) >= t.
      const std::int64_t t = k + 1 + *table.valuation[n] + den_val;
      bool candidate;
      if (t <= digits) {
        const BigInt pt = prime_power(p, t);
        candidate = mod_floor(residue[m] * den_mod - num_mod * residue[n], pt) == 0;
      } else {
        candidate = true;
      }
      if (!candidate) return true;
      const Valuation achieved = quotient_distance(table.exact[m], table.exact[n], target, p);
      if (achieved > Valuation(k)) {
        r.hit = ProbeHit{m, n, achieved};
        return false;
      }
      return true;
    });
    return r;
  };

  ProbeReport report{target, k, std::nullopt, 0, bound};
  const unsigned workers = std::max(1u, options.workers);
  const std::uint64_t block = workers == 1 ? 1 : 4 * static_cast<std::uint64_t>(workers);
  for (std::uint64_t start = 0; start <= bound; start += block) {
    const std::uint64_t end = std::min<std::uint64_t>(bound + 1, start + block);
    std::vector<detail::ShellResult> results(end - start);
    if (workers == 1) {
      for (std::uint64_t s = start; s < end; ++s) results[s - start] = scan_shell(s);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (std::uint64_t s = start + w; s < end; s += workers) results[s - start] = scan_shell(s);
        });
      }
      for (std::thread& th : pool) th.join();
    }
    for (const detail::ShellResult& r : results) {
      report.pairs_searched += r.pairs;
      if (r.hit) {
        report.hit = r.hit;
        return report;
      }
    }
  }
  return report;
}

inline std::int64_t gcd_of_valuations(const std::map<std::int64_t, SpectrumWitness>& vals) {
  std::int64_t g = 0;
  for (const auto& [v, w] : vals) g = std::gcd(g, v < 0 ? -v : v);
  return g;
}

/// All nu_p(x_m / x_n) for m, n <= bound with x_m, x_n != 0 (m = n included),
/// each with the first pair in canonical order that realizes it.
inline SpectrumReport valuation_spectrum(const RecurrenceSpec& spec, Prime p, std::uint64_t bound = kDefaultBound) {
  if (bound < 1) throw DomainError("bound must be at least 1");
  if (std::all_of(spec.initials().begin(), spec.initials().end(), [](const BigInt& x) { return x == 0; })) {
    throw InvalidSpec("the sequence is identically zero");
  }
  const detail::TermTable table = detail::term_table(spec, p, bound, 1);
  SpectrumReport report;
  report.bound = bound;
  for (std::uint64_t s = 0; s <= bound; ++s) {
    for_each_pair_in_shell(s, [&](std::uint64_t m, std::uint64_t n) {
      if (table.valuation[m] && table.valuation[n]) {
        report.valuations.try_emplace(*table.valuation[m] - *table.valuation[n], SpectrumWitness{m, n});
      }
      return true;
    });
  }
  report.gcd = gcd_of_valuations(report.valuations);
  report.all_even = std::all_of(report.valuations.begin(), report.valuations.end(),
                                [](const auto& e) { return e.first % 2 == 0; });
  if (report.valuations.empty()) {
    report.parity = "no nonzero terms up to the bound";
  } else if (report.gcd == 0) {
    report.parity = "every quotient is a p-adic unit; valuations other than 0 are missed";
  } else if (report.gcd == 1) {
    report.parity = "valuations have gcd 1; no divisibility gap";
  } else {
    report.parity = "all valuations lie in " + std::to_string(report.gcd) + "Z" +
                    (report.all_even ? " (all even)" : "") + "; other valuations are missed";
  }
  return report;
}

inline constexpr std::uint64_t kCoverageModulusLimit = std::uint64_t{1} << 26;

/// Unit residue classes mod p^k attained by the unit parts of x_m / x_n
/// for m, n <= bound with x_m, x_n != 0 (m = n included).
inline CoverageReport residue_coverage(const RecurrenceSpec& spec, Prime p, int k, std::uint64_t bound = kDefaultBound) {
  if (k < 1) throw DomainError("precision k must be at least 1");
  const BigInt modulus_big = prime_power(p, k);
  if (modulus_big > kCoverageModulusLimit) {
    throw DomainError("p^k = " + to_string(modulus_big) + " is too large for a coverage table (limit 2^26)");
  }
  const auto modulus = static_cast<std::uint64_t>(modulus_big);
  const detail::TermTable table = detail::term_table(spec, p, bound, k);

  std::vector<bool> seen_unit(modulus, false);
  std::vector<std::uint64_t> units;
  for (std::size_t i = 0; i < table.unit.size(); ++i) {
    if (!table.valuation[i]) continue;
    const auto u = static_cast<std::uint64_t>(table.unit[i]);
    if (!seen_unit[u]) {
      seen_unit[u] = true;
      units.push_back(u);
    }
  }
  std::vector<std::uint64_t> inverses;
  for (const std::uint64_t u : units) {
    inverses.push_back(static_cast<std::uint64_t>(inverse_mod(BigInt(u), modulus_big)));
  }

  std::vector<bool> hit(modulus, false);
  for (const std::uint64_t a : units) {
    for (const std::uint64_t b_inv : inverses) {
      hit[static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b_inv) % modulus)] = true;
    }
  }

  CoverageReport report;
  report.k = k;
  report.bound = bound;
  report.total = modulus - modulus / p.value();
  for (std::uint64_t c = 1; c < modulus; ++c) {
    if (c % p.value() == 0) continue;
    if (hit[c]) {
      ++report.attained;
    } else {
      report.missing.push_back(c);
    }
  }
  report.fraction = static_cast<double>(report.attained) / static_cast<double>(report.total);
  return report;
}

}  // namespace pqs
