#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tanglekit {

enum class ErrorKind {
  TrivialSeparation,
  IndexOutOfRange,
  LengthMismatch,
  LimitExceeded,
  GroundMismatch,
  NotATangle,
  OrderNotSubmodular,
  NotKTangle,
  MissingOrder,
  EmptySet,
  NotNormalized,
  NotGuiding,
  LPFailure,
  NumericalInstability,
  InvalidParam,
  ParseError,
  DegenerateColumn,
  InternalError,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tanglekit
