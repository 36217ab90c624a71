#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace acq {

enum class ErrorCode {
  InvalidGraph,
  InvalidWeights,
  ParseError,
  NonAdjacent,
  InsufficientReceiverWeight,
  EmptyDonor,
  VertexOutOfRange,
  ZeroTotalWeight,
  StateSpaceBudgetExceeded,
  UnsupportedFamily,
  TargetOutOfRange,
  BudgetExceeded,
  InsufficientTableDepth,
  DuplicateWeights,
  UnsupportedSize,
  UnsupportedFormat,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonAdjacent: return "NonAdjacent";
    case ErrorCode::InsufficientReceiverWeight: return "InsufficientReceiverWeight";
    case ErrorCode::EmptyDonor: return "EmptyDonor";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::ZeroTotalWeight: return "ZeroTotalWeight";
    case ErrorCode::StateSpaceBudgetExceeded: return "StateSpaceBudgetExceeded";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InsufficientTableDepth: return "InsufficientTableDepth";
    case ErrorCode::DuplicateWeights: return "DuplicateWeights";
    case ErrorCode::UnsupportedSize: return "UnsupportedSize";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace acq
