#pragma once

// The pqs command-line front end. run_cli is the whole program minus the
// process boundary, so tests can drive it with in-memory streams.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "pqs/classifier.hpp"
#include "pqs/json_io.hpp"
#include "pqs/probe.hpp"
#include "pqs/recurrence.hpp"

namespace pqs {

/// Process exit codes; stable for scripting.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitUnknown = 2,
  kExitNotDense = 3,
  kExitMalformedJson = 4,
  kExitSchema = 5,
  kExitZeroLastCoefficient = 6,
  kExitLengthMismatch = 7,
  kExitInvalidRoots = 8,
  kExitCertificateRejected = 9,
  kExitComputation = 10,
};

inline int exit_code_for(InvalidSpec::Kind kind) {
  switch (kind) {
    case InvalidSpec::Kind::zero_last_coefficient: return kExitZeroLastCoefficient;
    case InvalidSpec::Kind::length_mismatch: return kExitLengthMismatch;
    case InvalidSpec::Kind::invalid_roots: return kExitInvalidRoots;
    case InvalidSpec::Kind::malformed:
    case InvalidSpec::Kind::order_too_small: return kExitSchema;
  }
  return kExitSchema;
}

inline int exit_code_for(Outcome o) {
  switch (o) {
    case Outcome::dense_certified: return kExitOk;
    case Outcome::not_dense: return kExitNotDense;
    case Outcome::unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

/// Human name of the result a tag stands for.
inline std::string theorem_name(TheoremTag tag) {
  switch (tag) {
    case TheoremTag::distinct_roots: return "Theorem 1.2";
    case TheoremTag::double_root: return "Theorem 1.3";
    case TheoremTag::full_multiplicity: return "Theorem 1.4";
    case TheoremTag::triple_root:
    case TheoremTag::triple_root_x0_zero:
    case TheoremTag::triple_root_converse: return "Theorem 1.5(a)";
    case TheoremTag::two_equal_roots: return "Theorem 1.5(b)";
    case TheoremTag::binomial_nondense: return "Remark on binomial recurrences";
  }
  return to_string(tag);
}

/// PADIC_PROBE_PARALLELISM caps the probe worker count; absent or invalid means 1.
inline unsigned probe_workers(const char* env) {
  if (env == nullptr || !is_decimal_integer(env) || env[0] == '-') return 1;
  const BigInt requested = parse_bigint(env);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (requested < 1) return 1;
  return requested > hw ? hw : static_cast<unsigned>(requested);
}

struct CliEnvironment {
  std::istream* in = &std::cin;
  std::ostream* out = &std::cout;
  std::ostream* err = &std::cerr;
  unsigned probe_workers = 1;
};

namespace detail {

struct CliOptions {
  std::string spec_path = "-";
  std::string format = "text";
  std::uint64_t prime = 0;
  int precision = kDefaultPrecision;
  std::uint64_t bound = kDefaultBound;
  std::string target;
  int k = 0;
  std::uint64_t n = 0;
  std::string certificate_path;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

inline std::string read_all(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::string read_file_or_stdin(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return read_all(in);
  std::ifstream file(path);
  if (!file) throw UsageError("cannot open '" + path + "'");
  return read_all(file);
}

inline Prime require_prime(const CliOptions& o) {
  if (o.prime == 0) throw UsageError("--prime is required for this command");
  try {
    return Prime(o.prime);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--prime: ") + e.what());
  }
}

inline std::optional<RootFactorization> roots_of(const SpecDocument& doc) {
  if (doc.roots) return doc.roots;
  return find_integer_roots(doc.spec);
}

inline std::string join_ints(const std::vector<BigRational>& xs) {
  std::string out;
  for (const BigRational& x : xs) out += (out.empty() ? "" : ", ") + to_string(x);
  return out;
}

inline void print(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

inline std::string hit_text(const ProbeReport& r) {
  if (!r.hit) return "none";
  return "(" + std::to_string(r.hit->m) + ", " + std::to_string(r.hit->n) + ")";
}

// Certificate files may hold a bare certificate, a verdict, or the JSON
// printed by `classify --format json`.
inline Certificate certificate_from(const Json& j) {
  if (j.is_object() && j.contains("verdict")) return certificate_from(j["verdict"]);
  if (j.is_object() && j.contains("outcome")) {
    const Json& c = detail::field(j, "certificate", "$");
    if (c.is_null()) throw SchemaViolation({"$.certificate: the verdict carries no certificate"});
    return decode<Certificate>(c, "$.certificate");
  }
  return decode<Certificate>(j);
}

inline int cmd_classify(const CliOptions& o, const SpecDocument& doc, std::ostream& out) {
  const Prime p = require_prime(o);
  const Verdict v = doc.roots ? classify(doc.spec, *doc.roots, p, o.precision) : classify(doc.spec, p, o.precision);
  if (o.format == "json") {
    Json j;
    j["command"] = "classify";
    j["prime"] = encode_count(p.value());
    j["precision"] = std::to_string(o.precision);
    j["spec"] = encode(doc);
    j["verdict"] = encode(v);
    print(out, j);
  } else {
    out << to_string(v.outcome);
    if (v.tag) out << " (" << theorem_name(*v.tag) << ")";
    out << "\n";
    if (v.tag) out << "tag: " << to_string(*v.tag) << "\n";
    out << "reason: " << v.reason << "\n";
    for (const std::string& note : v.notes) out << "note: " << note << "\n";
    if (v.certificate) {
      out << "certificate:\n";
      print(out, encode(*v.certificate));
    }
  }
  return exit_code_for(v.outcome);
}

inline int cmd_certify(const CliOptions& o, const SpecDocument& doc, std::istream& in, std::ostream& out) {
  const Prime p = require_prime(o);
  if (o.certificate_path.empty()) throw UsageError("--certificate FILE is required");
  if (o.certificate_path == "-" && (o.spec_path.empty() || o.spec_path == "-")) {
    throw UsageError("the spec and the certificate cannot both come from standard input");
  }
  const Certificate cert = certificate_from(parse_json_text(read_file_or_stdin(o.certificate_path, in)));
  const auto roots = roots_of(doc);
  bool ok = false;
  std::string reason;
  if (!roots) {
    reason = "no integer factorization of the characteristic polynomial; add \"roots\" to the spec";
  } else {
    ok = verify(cert, doc.spec, *roots, p);
    reason = ok ? "rebuilt certificate matches and every check passes" : "certificate does not match the spec";
  }
  if (o.format == "json") {
    Json j;
    j["command"] = "certify";
    j["prime"] = encode_count(p.value());
    j["accepted"] = ok;
    j["reason"] = reason;
    print(out, j);
  } else {
    out << (ok ? "certificate accepted" : "certificate rejected") << "\n";
    out << "reason: " << reason << "\n";
  }
  return ok ? kExitOk : kExitCertificateRejected;
}

inline int cmd_probe(const CliOptions& o, const SpecDocument& doc, unsigned workers, std::ostream& out) {
  const Prime p = require_prime(o);
  if (o.target.empty()) throw UsageError("--target NUM/DEN is required");
  if (o.k < 1) throw UsageError("--k K (K >= 1) is required");
  BigRational target;
  try {
    target = parse_rational(o.target);
  } catch (const Error& e) {
    throw UsageError(std::string("--target: ") + e.what());
  }
  const ProbeReport r = probe_target(doc.spec, p, target, o.k, o.bound, {workers});
  if (o.format == "json") {
    print(out, encode(r));
  } else {
    out << "hit: " << hit_text(r) << "\n";
    if (r.hit) out << "achieved valuation: " << r.hit->achieved.to_string() << "\n";
    out << "target: " << to_string(r.target) << "\n";
    out << "k: " << r.k << "\n";
    out << "bound: " << r.bound << "\n";
    out << "pairs searched: " << r.pairs_searched << "\n";
  }
  return kExitOk;
}

inline int cmd_spectrum(const CliOptions& o, const SpecDocument& doc, std::ostream& out) {
  const Prime p = require_prime(o);
  const SpectrumReport r = valuation_spectrum(doc.spec, p, o.bound);
  if (o.format == "json") {
    print(out, encode(r));
  } else {
    out << "valuations:";
    for (const auto& [v, w] : r.valuations) out << " " << v;
    out << "\n";
    for (const auto& [v, w] : r.valuations) out << "witness " << v << ": (" << w.m << ", " << w.n << ")\n";
    out << "gcd: " << r.gcd << "\n";
    out << "all even: " << (r.all_even ? "yes" : "no") << "\n";
    out << "parity: " << r.parity << "\n";
    out << "bound: " << r.bound << "\n";
  }
  return kExitOk;
}

inline int cmd_coverage(const CliOptions& o, const SpecDocument& doc, std::ostream& out) {
  const Prime p = require_prime(o);
  if (o.k < 1) throw UsageError("--k K (K >= 1) is required");
  const CoverageReport r = residue_coverage(doc.spec, p, o.k, o.bound);
  if (o.format == "json") {
    print(out, encode(r));
  } else {
    out << "coverage: " << r.attained << "/" << r.total << "\n";
    std::ostringstream frac;
    frac.precision(17);
    frac << r.fraction;
    out << "fraction: " << frac.str() << "\n";
    out << "k: " << r.k << "\n";
    out << "bound: " << r.bound << "\n";
    out << "missing:";
    for (const std::uint64_t c : r.missing) out << " " << c;
    out << "\n";
  }
  return kExitOk;
}

inline int cmd_closed_form(const CliOptions& o, const SpecDocument& doc, std::ostream& out) {
  const auto roots = roots_of(doc);
  if (!roots) throw DomainError("no integer factorization of the characteristic polynomial; add \"roots\" to the spec");
  const ClosedForm cf = solve_closed_form(doc.spec, *roots);
  if (o.format == "json") {
    print(out, encode(cf));
  } else {
    out << "x_n = sum over roots a of P_a(n) a^n, P_a(n) = c_0 + c_1 n + ...\n";
    for (std::size_t i = 0; i < cf.roots.roots().size(); ++i) {
      const Root& r = cf.roots.roots()[i];
      out << "root " << to_string(r.value) << " multiplicity " << r.multiplicity << ": " << join_ints(cf.polynomials[i])
          << "\n";
    }
    out << "det: " << to_string(cf.det) << "\n";
  }
  return kExitOk;
}

inline int cmd_term(const CliOptions& o, const SpecDocument& doc, std::ostream& out) {
  const BigInt x = term(doc.spec, o.n);
  if (o.format == "json") {
    print(out, Json{{"n", encode_count(o.n)}, {"term", encode(x)}});
  } else {
    out << to_string(x) << "\n";
  }
  return kExitOk;
}

}  // namespace detail

/// Runs one command. args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, const CliEnvironment& env = {}) {
  std::ostream& out = *env.out;
  std::ostream& err = *env.err;
  detail::CliOptions o;

  CLI::App app{"p-adic density of quotient sets of linear recurrences", "pqs"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  auto common = [&](CLI::App* sub, bool wants_prime) {
    sub->add_option("spec", o.spec_path, "Spec JSON file (default: standard input)");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    if (wants_prime) sub->add_option("--prime", o.prime, "The prime p");
  };

  CLI::App* classify_cmd = app.add_subcommand("classify", "Classify density and emit a certificate");
  common(classify_cmd, true);
  classify_cmd->add_option("--precision", o.precision, "p-adic digits for the certificate")->check(CLI::Range(1, 4096));

  CLI::App* certify_cmd = app.add_subcommand("certify", "Re-verify a stored certificate");
  common(certify_cmd, true);
  certify_cmd->add_option("--certificate", o.certificate_path, "Certificate JSON file");

  CLI::App* probe_cmd = app.add_subcommand("probe", "Search for a quotient close to a target");
  common(probe_cmd, true);
  probe_cmd->add_option("--target", o.target, "Target rational NUM/DEN");
  probe_cmd->add_option("--k", o.k, "Required closeness: nu_p(x_m/x_n - target) > k");
  probe_cmd->add_option("--bound", o.bound, "Largest index searched");

  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "Valuations realized by quotients");
  common(spectrum_cmd, true);
  spectrum_cmd->add_option("--bound", o.bound, "Largest index searched");

  CLI::App* coverage_cmd = app.add_subcommand("coverage", "Unit residue classes mod p^k attained by quotients");
  common(coverage_cmd, true);
  coverage_cmd->add_option("--k", o.k, "Exponent k of the modulus p^k");
  coverage_cmd->add_option("--bound", o.bound, "Largest index searched");

  CLI::App* closed_cmd = app.add_subcommand("closed-form", "Solve for the closed form over the integer roots");
  common(closed_cmd, false);

  CLI::App* term_cmd = app.add_subcommand("term", "Print x_n");
  common(term_cmd, false);
  term_cmd->add_option("--n", o.n, "Index n")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run 'pqs --help' for usage\n";
    return kExitUsage;
  }

  try {
    const SpecDocument doc = parse_spec(detail::read_file_or_stdin(o.spec_path, *env.in));
    if (classify_cmd->parsed()) return detail::cmd_classify(o, doc, out);
    if (certify_cmd->parsed()) return detail::cmd_certify(o, doc, *env.in, out);
    if (probe_cmd->parsed()) return detail::cmd_probe(o, doc, env.probe_workers, out);
    if (spectrum_cmd->parsed()) return detail::cmd_spectrum(o, doc, out);
    if (coverage_cmd->parsed()) return detail::cmd_coverage(o, doc, out);
    if (closed_cmd->parsed()) return detail::cmd_closed_form(o, doc, out);
    return detail::cmd_term(o, doc, out);
  } catch (const detail::UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MalformedJson& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformedJson;
  } catch (const SchemaViolation& e) {
    err << "schema violation:\n";
    for (const std::string& v : e.violations()) err << "  " << v << "\n";
    return kExitSchema;
  } catch (const InvalidSpec& e) {
    err << "invalid spec: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitComputation;
  }
}

}  // namespace pqs
