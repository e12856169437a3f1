#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phantom {

enum class ErrorKind {
  NotInvertible,
  RootDomain,
  LogDomain,
  BadAlpha,
  OutOfDomain,
  QuadratureFailure,
  UnknownOutcome,
  ConditioningDegenerate,
  BadPartition,
  BadCoefficients,
  InvalidMeasure,
  BadOrder,
  EmptyRange,
  BadParameter,
  DegenerateVariance,
  BadVariant,
  SyntaxError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace phantom
