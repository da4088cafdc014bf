#pragma once

#include <stdexcept>
#include <string>

namespace clams {

enum class ErrorCode {
  InvalidArgument,
  EmptyInput,
  NonFinite,
  DegenerateFit,
  DegenerateComponent,
  TooShort,
  TooFewRows,
  OutOfRange,
  IoError,
  ParseError,
  RangeError,
  FormatVersionMismatch,
  ChecksumMismatch,
  LengthMismatch,
  EmptyOverlap,
  TooFewClusterings,
  ZeroVariance,
  SingleCluster,
  AllRunsFailed,
  KTooLarge,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// True for failures caused by malformed or unreadable input files.
inline bool is_input_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
    case ErrorCode::RangeError:
    case ErrorCode::FormatVersionMismatch:
    case ErrorCode::ChecksumMismatch:
    case ErrorCode::EmptyInput:
    case ErrorCode::NonFinite:
      return true;
    default:
      return false;
  }
}

}  // namespace clams
