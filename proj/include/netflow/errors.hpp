#pragma once

#include <stdexcept>
#include <string>

namespace netflow {

enum class ErrorCode {
  WeightSum,
  NegativeWeight,
  ThresholdOrder,
  LengthMismatch,
  IndexOutOfRange,
  InvalidArgument,
  AlphaOutOfRange,
  NonpositiveDt,
  StepOutOfRange,
  NotAPermutation,
  DimensionMismatch,
  Parse,
  DuplicateId,
  EmptyFile,
  Schema,
  Io,
  Bind,
};

const char* to_string(ErrorCode code) noexcept;

/// Validation and environment failures. Everything the library throws
/// deliberately is an Error carrying one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures caused by the environment (files, sockets) rather
  /// than by invalid input.
  bool is_environmental() const noexcept {
    return code_ == ErrorCode::Io || code_ == ErrorCode::Bind;
  }

 private:
  ErrorCode code_;
};

}  // namespace netflow
