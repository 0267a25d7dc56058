#pragma once

#include <stdexcept>
#include <string>

namespace casrough {

enum class ErrorCode {
  InvalidArgument,
  NonPositiveParameter,
  NonFiniteIntegrand,
  ParseError,
  DimensionMismatch,
  NonFiniteHeight,
  MapTooSmall,
  ZeroVariance,
  ZeroAtOrigin,
  SensitivityRangeExceeded,
  TranscriptionUnavailable,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace casrough
