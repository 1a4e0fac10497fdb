#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eisenzero {

/// Every failure the library reports maps onto one of these codes; the CLI
/// turns them into exit statuses and report fields.
enum class ErrorCode {
  WidthMismatch,
  DivisionByZeroSeries,
  EmptyTruncation,
  TruncationExceeded,
  InvalidEtaSpec,
  WeightTooSmall,
  ImaginaryPartTooSmall,
  PrecisionTooLow,
  UnknownGroup,
  ConfigValidation,
  UnknownEllipticClass,
  DoesNotExist,
  UnsupportedLevel,
  RecipeInvalid,
  RankMismatch,
  TruncationTooShort,
  NotPolynomial,
  PrecisionExhausted,
  NonIsolatedCrit,
  NotFound,
  NonConvergent,
  PreconditionCuspGrowth,
  InvalidArgument,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::WidthMismatch: return "WidthMismatch";
    case ErrorCode::DivisionByZeroSeries: return "DivisionByZeroSeries";
    case ErrorCode::EmptyTruncation: return "EmptyTruncation";
    case ErrorCode::TruncationExceeded: return "TruncationExceeded";
    case ErrorCode::InvalidEtaSpec: return "InvalidEtaSpec";
    case ErrorCode::WeightTooSmall: return "WeightTooSmall";
    case ErrorCode::ImaginaryPartTooSmall: return "ImaginaryPartTooSmall";
    case ErrorCode::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorCode::UnknownGroup: return "UnknownGroup";
    case ErrorCode::ConfigValidation: return "ConfigValidation";
    case ErrorCode::UnknownEllipticClass: return "UnknownEllipticClass";
    case ErrorCode::DoesNotExist: return "DoesNotExist";
    case ErrorCode::UnsupportedLevel: return "UnsupportedLevel";
    case ErrorCode::RecipeInvalid: return "RecipeInvalid";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::TruncationTooShort: return "TruncationTooShort";
    case ErrorCode::NotPolynomial: return "NotPolynomial";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::NonIsolatedCrit: return "NonIsolatedCrit";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::PreconditionCuspGrowth: return "PreconditionCuspGrowth";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace eisenzero
