#include "qlform/error.hpp"

namespace qlform {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InexactDivision: return "INEXACT_DIVISION";
    case ErrorCode::ArityMismatch: return "ARITY_MISMATCH";
    case ErrorCode::BothZero: return "BOTH_ZERO";
    case ErrorCode::CapExceeded: return "CAP_EXCEEDED";
    case ErrorCode::DuplicateVar: return "DUPLICATE_VAR";
    case ErrorCode::ThetaIsSquare: return "THETA_IS_SQUARE";
    case ErrorCode::DivisionByZero: return "DIVISION_BY_ZERO";
    case ErrorCode::FieldMismatch: return "FIELD_MISMATCH";
    case ErrorCode::ZeroForm: return "ZERO_FORM";
    case ErrorCode::RequiresAnisotropic: return "REQUIRES_ANISOTROPIC";
    case ErrorCode::IndexOutOfRange: return "INDEX_OUT_OF_RANGE";
    case ErrorCode::AIsSquare: return "A_IS_SQUARE";
    case ErrorCode::NotAnExtension: return "NOT_AN_EXTENSION";
    case ErrorCode::SplitForm: return "SPLIT_FORM";
    case ErrorCode::DimTooSmall: return "DIM_TOO_SMALL";
    case ErrorCode::SplitInput: return "SPLIT_INPUT";
    case ErrorCode::NotIsotropic: return "NOT_ISOTROPIC";
    case ErrorCode::InternalInconsistency: return "INTERNAL_INCONSISTENCY";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::UsageError: return "USAGE_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace qlform
