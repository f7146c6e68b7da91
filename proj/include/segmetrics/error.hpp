#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace segmetrics {

enum class ErrorCode {
  EmptyMask,
  WindowTooLarge,
  InvalidConfig,
  FormatError,
  IoError,
  ChannelMismatch,
  DegenerateObject,
  TooFewSamples,
  InsufficientPixels,
  DimensionMismatch,
  EmptyList,
  LengthMismatch,
  Undefined,
  InvalidGrid,
  InsufficientTextures,
  InvalidManifest,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ChannelMismatch: return "ChannelMismatch";
    case ErrorCode::DegenerateObject: return "DegenerateObject";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::InsufficientPixels: return "InsufficientPixels";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::Undefined: return "Undefined";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::InsufficientTextures: return "InsufficientTextures";
    case ErrorCode::InvalidManifest: return "InvalidManifest";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// CLI writes the code name into `skipped_reason` columns.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace segmetrics
