#include "casrough/error.hpp"

namespace casrough {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteHeight: return "NonFiniteHeight";
    case ErrorCode::MapTooSmall: return "MapTooSmall";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::ZeroAtOrigin: return "ZeroAtOrigin";
    case ErrorCode::SensitivityRangeExceeded: return "SensitivityRangeExceeded";
    case ErrorCode::TranscriptionUnavailable: return "TranscriptionUnavailable";
  }
  return "Unknown";
}

}  // namespace casrough
