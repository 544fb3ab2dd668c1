#include "numrad/error.hpp"

namespace numrad {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::FunctionNegative: return "FunctionNegative";
    case ErrorKind::ToleranceTooSmall: return "ToleranceTooSmall";
    case ErrorKind::NotUnit: return "NotUnit";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnknownChecker: return "UnknownChecker";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace numrad
