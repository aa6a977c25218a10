#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eopt {

enum class ErrorCode {
  EmptyAlphabet,
  NoCycle,
  Unreachable,
  Inadmissible,
  DimensionTooLarge,
  ShapeMismatch,
  NotInvertible,
  BudgetExceeded,
  InvalidArgument,
  NoGap,
  EqualExponents,
  TooShort,
  EmptySet,
  ParseError,
  ValidationError,
  CacheCorrupt,
};

/// Machine-readable name, as written into reports.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace eopt
