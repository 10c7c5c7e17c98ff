#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace triality {

enum class ErrorCode {
  NonHermitian,
  NotPSD,
  BadTrace,
  BadNorm,
  BadDim,
  BadRank,
  BadIndex,
  BadParameter,
  UnknownFunction,
  ZeroAtUniform,
  UnknownDirectMeasure,
  NotIsometry,
  RankMismatch,
  DimMismatch,
  InvalidConfig,
  BadFormat,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::BadTrace: return "BadTrace";
    case ErrorCode::BadNorm: return "BadNorm";
    case ErrorCode::BadDim: return "BadDim";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::ZeroAtUniform: return "ZeroAtUniform";
    case ErrorCode::UnknownDirectMeasure: return "UnknownDirectMeasure";
    case ErrorCode::NotIsometry: return "NotIsometry";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::BadFormat: return "BadFormat";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code; the
/// message is prefixed with the code name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace triality
