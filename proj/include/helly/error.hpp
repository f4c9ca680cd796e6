#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace helly {

enum class ErrorCode {
  InvalidMatrix,
  IllConditioned,
  SolverStall,
  EmptyBody,
  InvalidInput,
  NotInterior,
  DegenerateInterior,
  Outside,
  DegenerateSpan,
  JohnExtractionFailed,
  BarrierStuck,
  ShiftCertificateFailed,
  CaratheodoryFailed,
  OracleTooLarge,
  UnboundedBody,
  SharpnessGenFailed,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception. The code is
// what the CLI maps onto exit statuses; the message carries diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::SolverStall: return "SolverStall";
    case ErrorCode::EmptyBody: return "EmptyBody";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::DegenerateInterior: return "DegenerateInterior";
    case ErrorCode::Outside: return "Outside";
    case ErrorCode::DegenerateSpan: return "DegenerateSpan";
    case ErrorCode::JohnExtractionFailed: return "JohnExtractionFailed";
    case ErrorCode::BarrierStuck: return "BarrierStuck";
    case ErrorCode::ShiftCertificateFailed: return "ShiftCertificateFailed";
    case ErrorCode::CaratheodoryFailed: return "CaratheodoryFailed";
    case ErrorCode::OracleTooLarge: return "OracleTooLarge";
    case ErrorCode::UnboundedBody: return "UnboundedBody";
    case ErrorCode::SharpnessGenFailed: return "SharpnessGenFailed";
  }
  return "Unknown";
}

}  // namespace helly
