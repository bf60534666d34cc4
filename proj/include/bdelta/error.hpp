#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bdelta {

enum class ErrorCode {
  EmptyInput,
  TooFewPoints,
  NonPositiveRate,
  NonFiniteValue,
  NonAscendingRate,
  DuplicateRate,
  NonMonotoneQuality,
  QualityOutOfMetricBounds,
  MetricMismatch,
  SingularSystem,
  OutOfDomain,
  InvertedInterval,
  TargetInsideDomain,
  NoOverlap,
  NonInvertibleCurve,
  PdfOutsideCurveRange,
  UnnormalizedPdf,
  MixedKinds,
  MalformedRow,
  UnknownHeader,
  NonNumericField,
  OverlappingBins,
  NegativeMass,
  EmptyPdf,
  UsageError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library surfaces as this exception. Parse errors carry
// the 1-based input line; duplicate-row errors also carry the earlier line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt,
        std::optional<std::size_t> related_line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  std::optional<std::size_t> related_line() const noexcept { return related_line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::optional<std::size_t> related_line_;
};

}  // namespace bdelta
