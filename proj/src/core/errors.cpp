#include "netflow/errors.hpp"

namespace netflow {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::WeightSum: return "WeightSumError";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::ThresholdOrder: return "ThresholdOrderError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::NonpositiveDt: return "NonpositiveDt";
    case ErrorCode::StepOutOfRange: return "StepOutOfRange";
    case ErrorCode::NotAPermutation: return "NotAPermutation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::Schema: return "SchemaError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Bind: return "BindError";
  }
  return "UnknownError";
}

}  // namespace netflow
