#include "invexp/error.hpp"

namespace invexp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownElement: return "UnknownElement";
    case ErrorKind::NotAssociative: return "NotAssociative";
    case ErrorKind::NotInverse: return "NotInverse";
    case ErrorKind::IdempotentsDontCommute: return "IdempotentsDontCommute";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotIdempotent: return "NotIdempotent";
    case ErrorKind::NotNormalForm: return "NotNormalForm";
    case ErrorKind::NotPartialHom: return "NotPartialHom";
    case ErrorKind::LiftNotHomomorphism: return "LiftNotHomomorphism";
    case ErrorKind::PropertyViolation: return "PropertyViolation";
    case ErrorKind::StepLimitExceeded: return "StepLimitExceeded";
    case ErrorKind::OracleMismatch: return "OracleMismatch";
    case ErrorKind::EquivalenceViolation: return "EquivalenceViolation";
    case ErrorKind::CriteriaDisagree: return "CriteriaDisagree";
    case ErrorKind::NotFilterBase: return "NotFilterBase";
    case ErrorKind::NotPartialAction: return "NotPartialAction";
    case ErrorKind::SaturationFailure: return "SaturationFailure";
    case ErrorKind::RegularityFailure: return "RegularityFailure";
    case ErrorKind::GlobalityFailure: return "GlobalityFailure";
    case ErrorKind::NotAnAlgebra: return "NotAnAlgebra";
    case ErrorKind::NoUnit: return "NoUnit";
  }
  return "Unknown";
}

}  // namespace invexp
