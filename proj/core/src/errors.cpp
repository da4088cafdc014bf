#include "clams/errors.hpp"

namespace clams {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::DegenerateComponent: return "DegenerateComponent";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyOverlap: return "EmptyOverlap";
    case ErrorCode::TooFewClusterings: return "TooFewClusterings";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::SingleCluster: return "SingleCluster";
    case ErrorCode::AllRunsFailed: return "AllRunsFailed";
    case ErrorCode::KTooLarge: return "KTooLarge";
  }
  return "Unknown";
}

}  // namespace clams
