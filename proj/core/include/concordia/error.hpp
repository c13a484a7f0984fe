#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace concordia {

/// Failure categories raised by the library. Each maps to one documented
/// precondition or degenerate-input condition of an operation.
enum class ErrorCode {
  EmptyInput,
  DuplicateCell,
  UnknownLabel,
  InvalidLabel,
  InvalidIdentifier,
  EmptyUnit,
  NonBinaryLabels,
  InvalidDistribution,
  LabelSetMismatch,
  DegenerateMarginals,
  IncompleteDesign,
  NoPairableValues,
  DegenerateValues,
  InvalidMeasurementLevel,
  OutOfRange,
  NoDiscordantPairs,
  InvalidLevel,
  NotDefined,
  InfiniteResult,
  NormalizationUndefined,
  ZeroVector,
  ZeroVariance,
  LengthMismatch,
  UnmappedLabel,
  DegenerateSample,
  SizeExceedsData,
  EmptyScores,
  ZeroEffect,
  InvalidArgument,
  ParseError,
  UnsupportedFormat,
  MissingFixture,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace concordia
