#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gcm {

enum class ErrorKind {
  NotPrime,
  ReducibleModulus,
  NotPrimitive,
  InvalidModulus,
  DivisionByZero,
  ZeroArgument,
  DivisibilityViolation,
  IndexNotDividingOrder,
  NotInGroup,
  UnsupportedContext,
  SyntaxError,
  CoefficientNotInField,
  DomainElementOutsideField,
  WrongIndex,
  EvenQ,
  RootOnUnitCircle,
  GcdHypothesis,
  ConstraintViolated,
  InvalidArgument,
  CapExceeded,
  HypothesisViolated,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gcm
