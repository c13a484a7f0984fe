#include "concordia/error.hpp"

namespace concordia {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DuplicateCell: return "DuplicateCell";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::InvalidIdentifier: return "InvalidIdentifier";
    case ErrorCode::EmptyUnit: return "EmptyUnit";
    case ErrorCode::NonBinaryLabels: return "NonBinaryLabels";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::LabelSetMismatch: return "LabelSetMismatch";
    case ErrorCode::DegenerateMarginals: return "DegenerateMarginals";
    case ErrorCode::IncompleteDesign: return "IncompleteDesign";
    case ErrorCode::NoPairableValues: return "NoPairableValues";
    case ErrorCode::DegenerateValues: return "DegenerateValues";
    case ErrorCode::InvalidMeasurementLevel: return "InvalidMeasurementLevel";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NoDiscordantPairs: return "NoDiscordantPairs";
    case ErrorCode::InvalidLevel: return "InvalidLevel";
    case ErrorCode::NotDefined: return "NotDefined";
    case ErrorCode::InfiniteResult: return "InfiniteResult";
    case ErrorCode::NormalizationUndefined: return "NormalizationUndefined";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UnmappedLabel: return "UnmappedLabel";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::SizeExceedsData: return "SizeExceedsData";
    case ErrorCode::EmptyScores: return "EmptyScores";
    case ErrorCode::ZeroEffect: return "ZeroEffect";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::MissingFixture: return "MissingFixture";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace concordia
