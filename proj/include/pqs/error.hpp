#pragma once

#include <stdexcept>
#include <string>

namespace pqs {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside the mathematical domain of the operation
/// (non-prime modulus, series outside its disc of convergence, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A cancellation or query needs more p-adic digits than are tracked.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// Hypotheses of an algorithm (Hensel lifting, certificate construction)
/// do not hold for the given input.
class PreconditionFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed recurrence or root data.
class InvalidSpec : public Error {
 public:
  enum class Kind {
    malformed,              ///< wrong shape or unparsable field
    order_too_small,        ///< k < 2
    zero_last_coefficient,  ///< b_k = 0
    length_mismatch,        ///< coefficient / initial-value counts disagree with k
    invalid_roots,          ///< root list is malformed or does not factor the characteristic polynomial
  };

  explicit InvalidSpec(const std::string& what, Kind kind = Kind::malformed) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Something that cannot happen for valid input did happen.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace pqs
