#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlform {

enum class ErrorCode {
  InexactDivision,
  ArityMismatch,
  BothZero,
  CapExceeded,
  DuplicateVar,
  ThetaIsSquare,
  DivisionByZero,
  FieldMismatch,
  ZeroForm,
  RequiresAnisotropic,
  IndexOutOfRange,
  AIsSquare,
  NotAnExtension,
  SplitForm,
  DimTooSmall,
  SplitInput,
  NotIsotropic,
  InternalInconsistency,
  ParseError,
  UsageError,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Every domain failure in the library is reported through this exception.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qlform
