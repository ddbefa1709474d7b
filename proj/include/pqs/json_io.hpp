#pragma once

// Canonical JSON for specs, certificates, verdicts and reports. Field order
// is fixed and every integer is written as a decimal string, so values of
// any size survive a round trip through other tools.

#include "json.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pqs/bigint.hpp"
#include "pqs/classifier.hpp"
#include "pqs/error.hpp"
#include "pqs/padic_analytic.hpp"
#include "pqs/padic_core.hpp"
#include "pqs/probe.hpp"
#include "pqs/recurrence.hpp"

namespace pqs {

using Json = nlohmann::ordered_json;

/// Input that is not JSON at all.
class MalformedJson : public Error {
 public:
  using Error::Error;
};

/// JSON of the wrong shape; carries every violation found.
class SchemaViolation : public Error {
 public:
  explicit SchemaViolation(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const std::string& s : v) out += (out.empty() ? "" : "; ") + s;
    return out;
  }
  std::vector<std::string> violations_;
};

struct SpecDocument {
  RecurrenceSpec spec;
  std::optional<RootFactorization> roots;
  std::optional<std::string> label;

  friend bool operator==(const SpecDocument&, const SpecDocument&) = default;
};

inline Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw MalformedJson(std::string("malformed JSON: ") + e.what());
  }
}

namespace detail {

inline void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw SchemaViolation({path + ": " + what});
}

inline const Json& field(const Json& j, const char* key, const std::string& path) {
  require(j.is_object(), path, "expected an object");
  const auto it = j.find(key);
  require(it != j.end(), path, std::string("missing field \"") + key + "\"");
  return *it;
}

inline bool is_integer_value(const Json& j) {
  return j.is_number_integer() || (j.is_string() && is_decimal_integer(j.get<std::string>()));
}

inline BigInt integer_value(const Json& j) {
  if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  return parse_bigint(j.get<std::string>());
}

}  // namespace detail

// Encoding.

inline Json encode(const BigInt& x) { return to_string(x); }
inline Json encode(const BigRational& x) { return to_string(x); }
inline Json encode(Valuation v) { return v.to_string(); }
inline Json encode_count(std::uint64_t x) { return std::to_string(x); }

inline Json encode(const PAdicApprox& x) {
  Json j;
  switch (x.kind()) {
    case PAdicApprox::Kind::exact_zero:
      j["kind"] = "exact_zero";
      j["p"] = encode_count(x.prime().value());
      return j;
    case PAdicApprox::Kind::zero_to_precision:
      j["kind"] = "zero_to_precision";
      j["p"] = encode_count(x.prime().value());
      j["absolute_precision"] = encode(x.absolute_precision());
      return j;
    case PAdicApprox::Kind::nonzero:
      break;
  }
  j["kind"] = "nonzero";
  j["p"] = encode_count(x.prime().value());
  j["valuation"] = encode(x.valuation());
  j["unit"] = encode(x.unit());
  j["precision"] = std::to_string(x.precision());
  j["exact"] = x.exact_value() ? encode(*x.exact_value()) : Json(nullptr);
  return j;
}

inline Json encode(const ExponentialPolynomial& f) {
  Json j;
  j["p"] = encode_count(f.prime().value());
  j["terms"] = Json::array();
  for (const ExpTerm& t : f.terms()) {
    Json e;
    e["coefficient"] = encode(t.coefficient);
    e["degree"] = std::to_string(t.degree);
    e["rate"] = encode(t.rate);
    j["terms"].push_back(std::move(e));
  }
  return j;
}

inline Json encode(const RootFactorization& roots) {
  Json j = Json::array();
  for (const Root& r : roots.roots()) j.push_back(Json::array({encode(r.value), std::to_string(r.multiplicity)}));
  return j;
}

inline Json encode(const SpecDocument& doc) {
  Json j;
  j["order"] = std::to_string(doc.spec.order());
  j["coeffs"] = Json::array();
  for (const BigInt& b : doc.spec.coeffs()) j["coeffs"].push_back(encode(b));
  j["initial"] = Json::array();
  for (const BigInt& x : doc.spec.initials()) j["initial"].push_back(encode(x));
  if (doc.roots) j["roots"] = encode(*doc.roots);
  if (doc.label) j["label"] = *doc.label;
  return j;
}

inline Json encode(const Certificate& c) {
  Json j;
  j["scale"] = encode(c.scale);
  j["precision"] = std::to_string(c.precision);
  j["f0_valuation"] = encode(c.f0_valuation);
  j["fprime0_valuation"] = encode(c.fprime0_valuation);
  j["hensel_root"] = c.hensel_root ? encode(*c.hensel_root) : Json(nullptr);
  j["f"] = encode(c.f);
  j["identity_samples"] = Json::array();
  for (const IdentitySample& s : c.identity_samples) {
    j["identity_samples"].push_back(Json{{"n", encode_count(s.n)}, {"match", s.match}});
  }
  return j;
}

inline Json encode(const Verdict& v) {
  Json j;
  j["outcome"] = to_string(v.outcome);
  j["tag"] = v.tag ? Json(to_string(*v.tag)) : Json(nullptr);
  j["reason"] = v.reason;
  j["notes"] = v.notes;
  j["certificate"] = v.certificate ? encode(*v.certificate) : Json(nullptr);
  return j;
}

inline Json encode(const ProbeReport& r) {
  Json j;
  j["target"] = encode(r.target);
  j["k"] = std::to_string(r.k);
  j["bound"] = encode_count(r.bound);
  j["pairs_searched"] = encode_count(r.pairs_searched);
  if (r.hit) {
    j["hit"] = Json{{"m", encode_count(r.hit->m)}, {"n", encode_count(r.hit->n)}, {"achieved", encode(r.hit->achieved)}};
  } else {
    j["hit"] = nullptr;
  }
  return j;
}

inline Json encode(const SpectrumReport& r) {
  Json j;
  j["bound"] = encode_count(r.bound);
  j["valuations"] = Json::array();
  for (const auto& [v, w] : r.valuations) {
    j["valuations"].push_back(Json{{"valuation", std::to_string(v)}, {"m", encode_count(w.m)}, {"n", encode_count(w.n)}});
  }
  j["gcd"] = std::to_string(r.gcd);
  j["all_even"] = r.all_even;
  j["parity"] = r.parity;
  return j;
}

inline Json encode(const CoverageReport& r) {
  Json j;
  j["k"] = std::to_string(r.k);
  j["bound"] = encode_count(r.bound);
  j["attained"] = encode_count(r.attained);
  j["total"] = encode_count(r.total);
  j["fraction"] = r.fraction;
  j["missing"] = Json::array();
  for (const std::uint64_t c : r.missing) j["missing"].push_back(encode_count(c));
  return j;
}

inline Json encode(const ClosedForm& cf) {
  Json j;
  j["roots"] = encode(cf.roots);
  j["det"] = encode(cf.det);
  j["matrix"] = Json::array();
  for (const auto& row : cf.matrix) {
    Json r = Json::array();
    for (const BigInt& x : row) r.push_back(encode(x));
    j["matrix"].push_back(std::move(r));
  }
  j["coefficients"] = Json::array();
  for (const BigRational& c : cf.coefficients) j["coefficients"].push_back(encode(c));
  j["polynomials"] = Json::array();
  for (const auto& poly : cf.polynomials) {
    Json r = Json::array();
    for (const BigRational& c : poly) r.push_back(encode(c));
    j["polynomials"].push_back(std::move(r));
  }
  return j;
}

// Decoding. Every decoder throws SchemaViolation naming the offending path.

template <class T>
T decode(const Json& j, const std::string& path = "$");

namespace detail {

inline BigInt decode_int(const Json& j, const std::string& path) {
  require(is_integer_value(j), path, "expected an integer (number or decimal string)");
  return integer_value(j);
}

inline std::int64_t decode_small(const Json& j, const std::string& path) {
  const BigInt x = decode_int(j, path);
  require(x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max(), path,
          "integer out of range");
  return static_cast<std::int64_t>(x);
}

inline std::uint64_t decode_count(const Json& j, const std::string& path) {
  const BigInt x = decode_int(j, path);
  require(x >= 0 && x <= std::numeric_limits<std::uint64_t>::max(), path, "expected a non-negative integer");
  return static_cast<std::uint64_t>(x);
}

inline BigRational decode_rational(const Json& j, const std::string& path) {
  require(j.is_string() || j.is_number_integer(), path, "expected a rational \"num/den\"");
  if (j.is_number_integer()) return BigRational(integer_value(j));
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    throw SchemaViolation({path + ": " + e.what()});
  }
}

inline Valuation decode_valuation(const Json& j, const std::string& path) {
  if (j.is_string() && j.get<std::string>() == "inf") return Valuation::infinity();
  return Valuation(decode_small(j, path));
}

inline std::string decode_string(const Json& j, const std::string& path) {
  require(j.is_string(), path, "expected a string");
  return j.get<std::string>();
}

inline bool decode_bool(const Json& j, const std::string& path) {
  require(j.is_boolean(), path, "expected a boolean");
  return j.get<bool>();
}

inline const Json& array_field(const Json& j, const char* key, const std::string& path) {
  const Json& a = field(j, key, path);
  require(a.is_array(), path + "." + key, "expected an array");
  return a;
}

inline Prime decode_prime(const Json& j, const std::string& path) {
  try {
    return Prime(decode_count(j, path));
  } catch (const DomainError& e) {
    throw SchemaViolation({path + ": " + e.what()});
  }
}

// Wraps library exceptions raised while rebuilding a value as schema errors.
template <class F>
auto rebuild(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const SchemaViolation&) {
    throw;
  } catch (const InvalidSpec&) {
    throw;
  } catch (const Error& e) {
    throw SchemaViolation({path + ": " + e.what()});
  }
}

}  // namespace detail

template <>
inline PAdicApprox decode<PAdicApprox>(const Json& j, const std::string& path) {
  using namespace detail;
  const std::string kind = decode_string(field(j, "kind", path), path + ".kind");
  const Prime p = decode_prime(field(j, "p", path), path + ".p");
  if (kind == "exact_zero") return PAdicApprox::exact_zero(p);
  if (kind == "zero_to_precision") {
    return PAdicApprox::zero_to(p, decode_small(field(j, "absolute_precision", path), path + ".absolute_precision"));
  }
  require(kind == "nonzero", path + ".kind", "unknown kind \"" + kind + "\"");
  const std::int64_t v = decode_small(field(j, "valuation", path), path + ".valuation");
  const BigInt unit = decode_int(field(j, "unit", path), path + ".unit");
  const std::int64_t precision = decode_small(field(j, "precision", path), path + ".precision");
  require(precision >= 1 && precision <= 1'000'000, path + ".precision", "out of range");
  const Json& ex = field(j, "exact", path);
  std::optional<BigRational> exact;
  if (!ex.is_null()) exact = decode_rational(ex, path + ".exact");
  return rebuild(path, [&] { return PAdicApprox::from_parts(p, v, unit, static_cast<int>(precision), exact); });
}

template <>
inline ExponentialPolynomial decode<ExponentialPolynomial>(const Json& j, const std::string& path) {
  using namespace detail;
  const Prime p = decode_prime(field(j, "p", path), path + ".p");
  std::vector<ExpTerm> terms;
  const Json& arr = array_field(j, "terms", path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = path + ".terms[" + std::to_string(i) + "]";
    ExpTerm t{decode<PAdicApprox>(field(arr[i], "coefficient", at), at + ".coefficient"), 0,
              decode<PAdicApprox>(field(arr[i], "rate", at), at + ".rate")};
    const std::uint64_t degree = decode_count(field(arr[i], "degree", at), at + ".degree");
    require(degree <= std::numeric_limits<std::uint32_t>::max(), at + ".degree", "out of range");
    t.degree = static_cast<std::uint32_t>(degree);
    terms.push_back(std::move(t));
  }
  return rebuild(path, [&] { return ExponentialPolynomial(p, std::move(terms)); });
}

template <>
inline RootFactorization decode<RootFactorization>(const Json& j, const std::string& path) {
  using namespace detail;
  require(j.is_array(), path, "expected a list of [root, multiplicity] pairs");
  std::vector<Root> roots;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    require(j[i].is_array() && j[i].size() == 2, at, "expected a [root, multiplicity] pair");
    const BigInt value = decode_int(j[i][0], at + "[0]");
    const std::uint64_t mult = decode_count(j[i][1], at + "[1]");
    require(mult <= std::numeric_limits<std::uint32_t>::max(), at + "[1]", "multiplicity out of range");
    roots.push_back(Root{value, static_cast<std::uint32_t>(mult)});
  }
  return RootFactorization(std::move(roots));
}

/// Shape errors are collected together; value errors (b_k = 0, length
/// mismatch, roots that do not factor the polynomial) raise InvalidSpec.
template <>
inline SpecDocument decode<SpecDocument>(const Json& j, const std::string& path) {
  using namespace detail;
  if (!j.is_object()) throw SchemaViolation({path + ": expected an object"});
  std::vector<std::string> violations;
  for (const auto& [key, value] : j.items()) {
    if (key != "order" && key != "coeffs" && key != "initial" && key != "roots" && key != "label") {
      violations.push_back(path + "." + key + ": unknown field");
    }
  }
  auto int_list = [&](const char* key) {
    std::vector<BigInt> out;
    const auto it = j.find(key);
    if (it == j.end()) {
      violations.push_back(path + ": missing field \"" + key + "\"");
    } else if (!it->is_array()) {
      violations.push_back(path + "." + key + ": expected an array of integers");
    } else {
      for (std::size_t i = 0; i < it->size(); ++i) {
        if (is_integer_value((*it)[i])) {
          out.push_back(integer_value((*it)[i]));
        } else {
          violations.push_back(path + "." + key + "[" + std::to_string(i) + "]: expected an integer");
        }
      }
    }
    return out;
  };
  std::optional<std::int64_t> order;
  const auto oi = j.find("order");
  if (oi == j.end()) {
    violations.push_back(path + ": missing field \"order\"");
  } else if (!is_integer_value(*oi) || abs(integer_value(*oi)) > 1'000'000) {
    violations.push_back(path + ".order: expected an integer");
  } else {
    order = static_cast<std::int64_t>(integer_value(*oi));
  }
  std::vector<BigInt> coeffs = int_list("coeffs");
  std::vector<BigInt> initial = int_list("initial");
  std::optional<std::string> label;
  if (const auto li = j.find("label"); li != j.end()) {
    if (li->is_string()) {
      label = li->get<std::string>();
    } else {
      violations.push_back(path + ".label: expected a string");
    }
  }
  std::optional<RootFactorization> roots;
  const auto ri = j.find("roots");
  if (ri != j.end() && !ri->is_null()) {
    try {
      roots = decode<RootFactorization>(*ri, path + ".roots");
    } catch (const SchemaViolation& e) {
      violations.insert(violations.end(), e.violations().begin(), e.violations().end());
    }
  }
  if (!violations.empty()) throw SchemaViolation(std::move(violations));

  SpecDocument doc{RecurrenceSpec::with_order(*order, std::move(coeffs), std::move(initial)), std::move(roots),
                   std::move(label)};
  if (doc.roots && !validate_factorization(doc.spec, *doc.roots)) {
    throw InvalidSpec("the roots do not factor the characteristic polynomial", InvalidSpec::Kind::invalid_roots);
  }
  return doc;
}

inline SpecDocument parse_spec(std::string_view text) { return decode<SpecDocument>(parse_json_text(text)); }

template <>
inline Certificate decode<Certificate>(const Json& j, const std::string& path) {
  using namespace detail;
  Certificate c{decode<ExponentialPolynomial>(field(j, "f", path), path + ".f"),
                decode_int(field(j, "scale", path), path + ".scale"),
                decode_valuation(field(j, "f0_valuation", path), path + ".f0_valuation"),
                decode_valuation(field(j, "fprime0_valuation", path), path + ".fprime0_valuation"),
                std::nullopt,
                {},
                0};
  const Json& root = field(j, "hensel_root", path);
  if (!root.is_null()) c.hensel_root = decode<PAdicApprox>(root, path + ".hensel_root");
  const Json& samples = array_field(j, "identity_samples", path);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string at = path + ".identity_samples[" + std::to_string(i) + "]";
    c.identity_samples.push_back(
        IdentitySample{decode_count(field(samples[i], "n", at), at + ".n"), decode_bool(field(samples[i], "match", at), at + ".match")});
  }
  const std::int64_t precision = decode_small(field(j, "precision", path), path + ".precision");
  require(precision >= 1 && precision <= 100'000, path + ".precision", "out of range");
  c.precision = static_cast<int>(precision);
  return c;
}

template <>
inline Verdict decode<Verdict>(const Json& j, const std::string& path) {
  using namespace detail;
  Verdict v;
  const std::string outcome = decode_string(field(j, "outcome", path), path + ".outcome");
  const auto o = parse_outcome(outcome);
  require(o.has_value(), path + ".outcome", "unknown outcome \"" + outcome + "\"");
  v.outcome = *o;
  const Json& tag = field(j, "tag", path);
  if (!tag.is_null()) {
    const std::string text = decode_string(tag, path + ".tag");
    v.tag = parse_theorem_tag(text);
    require(v.tag.has_value(), path + ".tag", "unknown tag \"" + text + "\"");
  }
  v.reason = decode_string(field(j, "reason", path), path + ".reason");
  const Json& notes = array_field(j, "notes", path);
  for (std::size_t i = 0; i < notes.size(); ++i) {
    v.notes.push_back(decode_string(notes[i], path + ".notes[" + std::to_string(i) + "]"));
  }
  const Json& cert = field(j, "certificate", path);
  if (!cert.is_null()) v.certificate = decode<Certificate>(cert, path + ".certificate");
  return v;
}

template <>
inline ProbeReport decode<ProbeReport>(const Json& j, const std::string& path) {
  using namespace detail;
  ProbeReport r;
  r.target = decode_rational(field(j, "target", path), path + ".target");
  r.k = static_cast<int>(decode_small(field(j, "k", path), path + ".k"));
  r.bound = decode_count(field(j, "bound", path), path + ".bound");
  r.pairs_searched = decode_count(field(j, "pairs_searched", path), path + ".pairs_searched");
  const Json& hit = field(j, "hit", path);
  if (!hit.is_null()) {
    const std::string at = path + ".hit";
    r.hit = ProbeHit{decode_count(field(hit, "m", at), at + ".m"), decode_count(field(hit, "n", at), at + ".n"),
                     decode_valuation(field(hit, "achieved", at), at + ".achieved")};
  }
  return r;
}

template <>
inline SpectrumReport decode<SpectrumReport>(const Json& j, const std::string& path) {
  using namespace detail;
  SpectrumReport r;
  r.bound = decode_count(field(j, "bound", path), path + ".bound");
  const Json& vals = array_field(j, "valuations", path);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const std::string at = path + ".valuations[" + std::to_string(i) + "]";
    r.valuations.emplace(decode_small(field(vals[i], "valuation", at), at + ".valuation"),
                         SpectrumWitness{decode_count(field(vals[i], "m", at), at + ".m"),
                                         decode_count(field(vals[i], "n", at), at + ".n")});
  }
  r.gcd = decode_small(field(j, "gcd", path), path + ".gcd");
  r.all_even = decode_bool(field(j, "all_even", path), path + ".all_even");
  r.parity = decode_string(field(j, "parity", path), path + ".parity");
  return r;
}

template <>
inline CoverageReport decode<CoverageReport>(const Json& j, const std::string& path) {
  using namespace detail;
  CoverageReport r;
  r.k = static_cast<int>(decode_small(field(j, "k", path), path + ".k"));
  r.bound = decode_count(field(j, "bound", path), path + ".bound");
  r.attained = decode_count(field(j, "attained", path), path + ".attained");
  r.total = decode_count(field(j, "total", path), path + ".total");
  const Json& fraction = field(j, "fraction", path);
  require(fraction.is_number(), path + ".fraction", "expected a number");
  r.fraction = fraction.get<double>();
  const Json& missing = array_field(j, "missing", path);
  for (std::size_t i = 0; i < missing.size(); ++i) {
    r.missing.push_back(decode_count(missing[i], path + ".missing[" + std::to_string(i) + "]"));
  }
  return r;
}

template <>
inline ClosedForm decode<ClosedForm>(const Json& j, const std::string& path) {
  using namespace detail;
  ClosedForm cf{decode<RootFactorization>(field(j, "roots", path), path + ".roots"), {},
                decode_int(field(j, "det", path), path + ".det"), {}, {}};
  const Json& matrix = array_field(j, "matrix", path);
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    const std::string at = path + ".matrix[" + std::to_string(r) + "]";
    require(matrix[r].is_array(), at, "expected an array");
    std::vector<BigInt> row;
    for (std::size_t c = 0; c < matrix[r].size(); ++c) row.push_back(decode_int(matrix[r][c], at + "[" + std::to_string(c) + "]"));
    cf.matrix.push_back(std::move(row));
  }
  const Json& coeffs = array_field(j, "coefficients", path);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    cf.coefficients.push_back(decode_rational(coeffs[i], path + ".coefficients[" + std::to_string(i) + "]"));
  }
  const Json& polys = array_field(j, "polynomials", path);
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const std::string at = path + ".polynomials[" + std::to_string(i) + "]";
    require(polys[i].is_array(), at, "expected an array");
    std::vector<BigRational> poly;
    for (std::size_t d = 0; d < polys[i].size(); ++d) poly.push_back(decode_rational(polys[i][d], at + "[" + std::to_string(d) + "]"));
    cf.polynomials.push_back(std::move(poly));
  }
  return cf;
}

}  // namespace pqs
