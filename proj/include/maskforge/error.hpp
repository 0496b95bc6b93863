#pragma once

#include <stdexcept>
#include <string>

namespace maskforge {

enum class ErrorKind {
  Parse,
  NotDilation,
  UserDigitsInvalid,
  DivisionByZero,
  DimensionMismatch,
  NonIntegerFrequencies,
  WrongCount,
  NotDivisible,
  NotInZ0,
  NotInClass,
  MethodDisagreement,
  InternalIdentityViolation,
  ShapeMismatch,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` distinguishes the failure.
class MaskError : public std::runtime_error {
 public:
  MaskError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace maskforge
