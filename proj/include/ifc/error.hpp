#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ifc {

enum class ErrorCode {
  NonSquare,
  NonPositiveDiagonal,
  NonFinite,
  NotHermitian,
  NotUnitDiagonal,
  NotPSD,
  SchemaError,
  DimensionMismatch,
  IndexOutOfRange,
  RhoTooLarge,
  SingularCovariance,
  LabelOverlap,
  InternalInconsistency,
  TooLarge,
  WitnessFailure,
  ConditionViolated,
  NonStandardDiagonal,
  NotSorted,
  BetaInvalid,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (CLI, bindings) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Schema violations additionally report where in the document they occurred.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& message)
      : Error(ErrorCode::SchemaError, "at \"" + pointer + "\": " + message),
        pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace ifc
