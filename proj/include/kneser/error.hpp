#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kneser {

enum class ErrorCode {
  UnsupportedOrder,
  ZeroInverse,
  DegenerateInput,
  NotSkewTriple,
  ScaleLimit,
  NotIndependent,
  NotMaximal,
  NonIncidentPair,
  InvalidSpec,
  IOFailure,
  ThresholdTooLow,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::ZeroInverse: return "ZeroInverse";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::NotSkewTriple: return "NotSkewTriple";
    case ErrorCode::ScaleLimit: return "ScaleLimit";
    case ErrorCode::NotIndependent: return "NotIndependent";
    case ErrorCode::NotMaximal: return "NotMaximal";
    case ErrorCode::NonIncidentPair: return "NonIncidentPair";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::IOFailure: return "IOFailure";
    case ErrorCode::ThresholdTooLow: return "ThresholdTooLow";
  }
  return "Unknown";
}

/// Every library failure carries a machine-readable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kneser
