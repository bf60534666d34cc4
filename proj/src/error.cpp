#include "bdelta/error.hpp"

namespace bdelta {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NonAscendingRate: return "NonAscendingRate";
    case ErrorCode::DuplicateRate: return "DuplicateRate";
    case ErrorCode::NonMonotoneQuality: return "NonMonotoneQuality";
    case ErrorCode::QualityOutOfMetricBounds: return "QualityOutOfMetricBounds";
    case ErrorCode::MetricMismatch: return "MetricMismatch";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InvertedInterval: return "InvertedInterval";
    case ErrorCode::TargetInsideDomain: return "TargetInsideDomain";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::NonInvertibleCurve: return "NonInvertibleCurve";
    case ErrorCode::PdfOutsideCurveRange: return "PdfOutsideCurveRange";
    case ErrorCode::UnnormalizedPdf: return "UnnormalizedPdf";
    case ErrorCode::MixedKinds: return "MixedKinds";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownHeader: return "UnknownHeader";
    case ErrorCode::NonNumericField: return "NonNumericField";
    case ErrorCode::OverlappingBins: return "OverlappingBins";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::EmptyPdf: return "EmptyPdf";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> line,
             std::optional<std::size_t> related_line)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      line_(line),
      related_line_(related_line) {}

}  // namespace bdelta
