#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "bdelta/diagnostics.hpp"
#include "bdelta/interp.hpp"
#include "bdelta/rd_model.hpp"

namespace bdelta {

/// Extrapolation modes for BD-Rate when the quality ranges do not overlap.
enum class BdMode { None, Low, High, Both, LowAlways, HighAlways, BothAlways };

enum class BdKind { Rate, Quality };

enum class Extrapolation { None, Low, High, Both };

std::string_view to_string(BdMode m) noexcept;
std::string_view to_string(BdKind k) noexcept;
std::string_view to_string(Extrapolation e) noexcept;
std::string_view to_string(FitMethod m) noexcept;

/// Outcome of one BD comparison, test against anchor.
///
/// Rate values are percent (negative means the test needs less bitrate);
/// Quality values are metric units (positive means the test is better).
struct BdResult {
  BdKind kind = BdKind::Rate;
  double value = 0.0;
  MetricKind metric;
  /// The interval actually integrated, after any extrapolation. Quality axis
  /// for Rate results, Rate axis (log10 kbps) for Quality results.
  OverlapInterval interval_used;
  /// log10-rate range the comparison effectively covers; used to compare
  /// integration ranges across metrics.
  OverlapInterval rate_span;
  BdMode mode = BdMode::None;
  FitMethod method = FitMethod::PiecewiseCubic;
  Extrapolation extrapolated = Extrapolation::None;
  DiagnosticsReport diagnostics;
};

/// Average quality difference over the common log-rate range. Throws
/// MetricMismatch, NoOverlap, and fit errors.
BdResult bd_quality(const RdCurve& anchor, const RdCurve& test,
                    FitMethod method = FitMethod::PiecewiseCubic,
                    const LintThresholds& thresholds = {});

/// Average bitrate difference over the common quality range, reported as
/// 100 * (10^mean_log_gap - 1). Throws MetricMismatch, NonInvertibleCurve,
/// NoOverlap, and fit errors.
BdResult bd_rate(const RdCurve& anchor, const RdCurve& test,
                 FitMethod method = FitMethod::PiecewiseCubic,
                 const LintThresholds& thresholds = {});

/// BD-Rate with the extrapolation mode applied. Under `None` a disjoint pair
/// reports -100 or +100 instead of throwing NoOverlap.
BdResult bd_rate_with_mode(const RdCurve& anchor, const RdCurve& test, FitMethod method,
                           BdMode mode, const LintThresholds& thresholds = {});

/// How a bin's mass is spread within the bin.
enum class PdfDensity {
  LinearRate,  ///< constant density in kbps
  LogRate,     ///< constant density in log10(kbps)
};

struct PdfBin {
  double rate_lo_kbps;
  double rate_hi_kbps;
  double mass;

  friend bool operator==(const PdfBin&, const PdfBin&) = default;
};

/// Piecewise-constant probability density over bitrate.
class RatePdf {
 public:
  /// Validates and normalizes. Throws EmptyPdf, NegativeMass,
  /// OverlappingBins, NonPositiveRate.
  static RatePdf from_bins(std::vector<PdfBin> bins, PdfDensity density = PdfDensity::LinearRate);
  /// Validates without normalizing; `normalized()` reports whether the masses
  /// already sum to one.
  static RatePdf unnormalized(std::vector<PdfBin> bins,
                              PdfDensity density = PdfDensity::LinearRate);
  /// Single-bin uniform density over [lo, hi] kbps. With LogRate density this
  /// is the averaging measure of classic BD-Quality.
  static RatePdf uniform(double rate_lo_kbps, double rate_hi_kbps,
                         PdfDensity density = PdfDensity::LogRate);

  const std::vector<PdfBin>& bins() const noexcept { return bins_; }
  PdfDensity density() const noexcept { return density_; }
  bool normalized() const noexcept { return normalized_; }
  /// Sum of masses as supplied, before normalization.
  double source_mass() const noexcept { return source_mass_; }
  double total_mass() const;
  /// Copy with masses divided by their sum.
  RatePdf renormalized() const;

 private:
  std::vector<PdfBin> bins_;
  PdfDensity density_ = PdfDensity::LinearRate;
  bool normalized_ = false;
  double source_mass_ = 0.0;
};

struct WeightedOptions {
  /// Attach linear tails so fits cover the pdf support instead of failing
  /// with PdfOutsideCurveRange.
  bool extend_tails = false;
  LintThresholds thresholds;
};

/// pdf-weighted mean quality of the test minus that of the anchor, each
/// fitted as quality over log10-rate and integrated by adaptive Simpson per
/// pdf bin. Throws UnnormalizedPdf, PdfOutsideCurveRange.
BdResult bd_quality_weighted(const RdCurve& anchor, const RdCurve& test, FitMethod method,
                             const RatePdf& pdf, const WeightedOptions& options = {});

/// pdf-weighted mean of a single fitted quality-of-log-rate curve.
double weighted_mean_quality(const FittedCurve& quality_of_log_rate, const RatePdf& pdf);

struct Aggregate {
  BdKind kind = BdKind::Rate;
  FitMethod method = FitMethod::PiecewiseCubic;
  BdMode mode = BdMode::None;
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Unweighted mean across results with min/max spread. Throws EmptyInput,
/// MixedKinds.
Aggregate aggregate(std::span<const BdResult> results);

}  // namespace bdelta
