#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace invexp {

enum class ErrorKind {
  ParseError,
  UnknownElement,
  NotAssociative,
  NotInverse,
  IdempotentsDontCommute,
  InternalInconsistency,
  TooLarge,
  NotIdempotent,
  NotNormalForm,
  NotPartialHom,
  LiftNotHomomorphism,
  PropertyViolation,
  StepLimitExceeded,
  OracleMismatch,
  EquivalenceViolation,
  CriteriaDisagree,
  NotFilterBase,
  NotPartialAction,
  SaturationFailure,
  RegularityFailure,
  GlobalityFailure,
  NotAnAlgebra,
  NoUnit,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and the
/// CLI) can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace invexp
