#include "eopt/errors.hpp"

namespace eopt {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyAlphabet: return "EmptyAlphabet";
    case ErrorCode::NoCycle: return "NoCycle";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::Inadmissible: return "Inadmissible";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoGap: return "NoGap";
    case ErrorCode::EqualExponents: return "EqualExponents";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::CacheCorrupt: return "CacheCorrupt";
  }
  return "Unknown";
}

}  // namespace eopt
