#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bdelta {

/// One measured operating point: bitrate in kbps and a quality score in the
/// units of the curve's metric.
struct RdPoint {
  double rate_kbps = 0.0;
  double quality = 0.0;

  friend bool operator==(const RdPoint&, const RdPoint&) = default;
};

enum class MetricName { PSNR, SSIM, VMAF, MOS, Other };

struct QualityBounds {
  double lo;
  double hi;

  friend bool operator==(const QualityBounds&, const QualityBounds&) = default;
};

/// Metric identity. The named kinds carry fixed bounds (PSNR is unbounded);
/// `Other` carries a free-form label and no bounds unless given.
class MetricKind {
 public:
  MetricKind() = default;
  explicit MetricKind(MetricName name);
  static MetricKind other(std::string label, std::optional<QualityBounds> bounds = std::nullopt);

  /// Case-insensitive match against PSNR/SSIM/VMAF/MOS, otherwise `Other`.
  static MetricKind from_name(std::string_view text);

  MetricName name() const noexcept { return name_; }
  const std::string& label() const noexcept { return label_; }
  const std::optional<QualityBounds>& bounds() const noexcept { return bounds_; }
  bool higher_is_better() const noexcept { return true; }

  friend bool operator==(const MetricKind& a, const MetricKind& b) {
    return a.name_ == b.name_ && a.label_ == b.label_;
  }
  friend std::strong_ordering operator<=>(const MetricKind& a, const MetricKind& b) {
    if (auto c = a.name_ <=> b.name_; c != 0) return c;
    return a.label_ <=> b.label_;
  }

 private:
  MetricName name_ = MetricName::PSNR;
  std::string label_ = "PSNR";
  std::optional<QualityBounds> bounds_;
};

/// Validated rate-quality curve for one codec under one metric. Rates are
/// strictly increasing; qualities are non-decreasing unless the curve was
/// built with the non-monotone opt-in, in which case every decreasing step
/// is listed in `monotone_violations()`.
class RdCurve {
 public:
  const std::string& label() const noexcept { return label_; }
  const MetricKind& metric() const noexcept { return metric_; }
  std::span<const RdPoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool non_monotone_allowed() const noexcept { return non_monotone_allowed_; }
  /// Indices i where quality[i] < quality[i-1].
  const std::vector<std::size_t>& monotone_violations() const noexcept { return violations_; }

  std::vector<double> log_rates() const;
  std::vector<double> qualities() const;
  double min_quality() const;
  double max_quality() const;
  double min_log_rate() const;
  double max_log_rate() const;
  bool quality_strictly_increasing() const;

 private:
  friend RdCurve validate_curve(std::string label, std::vector<RdPoint> points, MetricKind metric,
                                bool allow_non_monotone);
  RdCurve() = default;

  std::string label_;
  MetricKind metric_;
  std::vector<RdPoint> points_;
  bool non_monotone_allowed_ = false;
  std::vector<std::size_t> violations_;
};

/// Accepts the points exactly as given (never reorders). Throws
/// `Error` with EmptyInput, TooFewPoints, NonPositiveRate, NonFiniteValue,
/// NonAscendingRate, DuplicateRate, NonMonotoneQuality or
/// QualityOutOfMetricBounds.
RdCurve validate_curve(std::string label, std::vector<RdPoint> points, MetricKind metric,
                       bool allow_non_monotone = false);

enum class Axis { Rate, Quality };

/// Common range of two curves on one axis. Rate is stored as log10(kbps).
struct OverlapInterval {
  Axis axis = Axis::Rate;
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;

  static OverlapInterval none(Axis axis) { return {axis, 0.0, 0.0, true}; }

  double length() const noexcept { return empty ? 0.0 : hi - lo; }
  /// Non-empty with hi > lo; a single touching point cannot be averaged over.
  bool has_extent() const noexcept { return !empty && hi > lo; }
  bool contains(double x) const noexcept { return !empty && x >= lo && x <= hi; }

  friend bool operator==(const OverlapInterval&, const OverlapInterval&) = default;
};

/// Range of a single curve on `axis` as [min, max].
std::pair<double, double> curve_range(const RdCurve& curve, Axis axis);

/// [max of minima, min of maxima]; the empty marker when the ranges are
/// disjoint. Throws MetricMismatch.
OverlapInterval compute_overlap(const RdCurve& a, const RdCurve& b, Axis axis);

/// Overlap length divided by the length of the hull of both ranges.
double overlap_fraction(const RdCurve& a, const RdCurve& b, Axis axis);

}  // namespace bdelta
