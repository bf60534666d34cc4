#include "bdelta/rd_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "bdelta/error.hpp"

namespace bdelta {

namespace {

std::string upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string describe(const RdPoint& p) {
  return "(" + std::to_string(p.rate_kbps) + " kbps, " + std::to_string(p.quality) + ")";
}

}  // namespace

MetricKind::MetricKind(MetricName name) : name_(name) {
  switch (name) {
    case MetricName::PSNR: label_ = "PSNR"; break;
    case MetricName::SSIM: label_ = "SSIM"; bounds_ = QualityBounds{0.0, 1.0}; break;
    case MetricName::VMAF: label_ = "VMAF"; bounds_ = QualityBounds{0.0, 100.0}; break;
    case MetricName::MOS: label_ = "MOS"; bounds_ = QualityBounds{1.0, 5.0}; break;
    case MetricName::Other: label_ = "OTHER"; break;
  }
}

MetricKind MetricKind::other(std::string label, std::optional<QualityBounds> bounds) {
  MetricKind kind(MetricName::Other);
  kind.label_ = std::move(label);
  kind.bounds_ = bounds;
  return kind;
}

MetricKind MetricKind::from_name(std::string_view text) {
  const std::string key = upper(text);
  if (key == "PSNR") return MetricKind(MetricName::PSNR);
  if (key == "SSIM") return MetricKind(MetricName::SSIM);
  if (key == "VMAF") return MetricKind(MetricName::VMAF);
  if (key == "MOS") return MetricKind(MetricName::MOS);
  return other(std::string(text));
}

std::vector<double> RdCurve::log_rates() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(std::log10(p.rate_kbps));
  return out;
}

std::vector<double> RdCurve::qualities() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.quality);
  return out;
}

double RdCurve::min_quality() const {
  return std::min_element(points_.begin(), points_.end(),
                          [](const auto& a, const auto& b) { return a.quality < b.quality; })
      ->quality;
}

double RdCurve::max_quality() const {
  return std::max_element(points_.begin(), points_.end(),
                          [](const auto& a, const auto& b) { return a.quality < b.quality; })
      ->quality;
}

double RdCurve::min_log_rate() const { return std::log10(points_.front().rate_kbps); }
double RdCurve::max_log_rate() const { return std::log10(points_.back().rate_kbps); }

bool RdCurve::quality_strictly_increasing() const {
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (!(points_[i].quality > points_[i - 1].quality)) return false;
  return true;
}

RdCurve validate_curve(std::string label, std::vector<RdPoint> points, MetricKind metric,
                       bool allow_non_monotone) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "curve '" + label + "' has no points");
  if (points.size() < 2)
    throw Error(ErrorCode::TooFewPoints, "curve '" + label + "' needs at least 2 points");

  std::vector<std::size_t> violations;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!std::isfinite(p.rate_kbps) || !std::isfinite(p.quality))
      throw Error(ErrorCode::NonFiniteValue, "point " + std::to_string(i) + " of '" + label + "'");
    if (p.rate_kbps <= 0.0)
      throw Error(ErrorCode::NonPositiveRate,
                  "point " + std::to_string(i) + " of '" + label + "' " + describe(p));
    if (const auto& b = metric.bounds(); b && (p.quality < b->lo || p.quality > b->hi))
      throw Error(ErrorCode::QualityOutOfMetricBounds,
                  "point " + std::to_string(i) + " of '" + label + "' " + describe(p) +
                      " outside [" + std::to_string(b->lo) + ", " + std::to_string(b->hi) +
                      "] for " + metric.label());
    if (i == 0) continue;
    const auto& prev = points[i - 1];
    if (p.rate_kbps == prev.rate_kbps)
      throw Error(ErrorCode::DuplicateRate,
                  "points " + std::to_string(i - 1) + " and " + std::to_string(i) + " of '" +
                      label + "' share rate " + std::to_string(p.rate_kbps));
    if (p.rate_kbps < prev.rate_kbps)
      throw Error(ErrorCode::NonAscendingRate,
                  "point " + std::to_string(i) + " of '" + label + "' has lower rate than point " +
                      std::to_string(i - 1));
    if (p.quality < prev.quality) {
      if (!allow_non_monotone)
        throw Error(ErrorCode::NonMonotoneQuality,
                    "quality of '" + label + "' decreases at point " + std::to_string(i) + " " +
                        describe(p));
      violations.push_back(i);
    }
  }

  RdCurve curve;
  curve.label_ = std::move(label);
  curve.metric_ = std::move(metric);
  curve.points_ = std::move(points);
  curve.non_monotone_allowed_ = allow_non_monotone;
  curve.violations_ = std::move(violations);
  return curve;
}

std::pair<double, double> curve_range(const RdCurve& curve, Axis axis) {
  if (axis == Axis::Rate) return {curve.min_log_rate(), curve.max_log_rate()};
  return {curve.min_quality(), curve.max_quality()};
}

OverlapInterval compute_overlap(const RdCurve& a, const RdCurve& b, Axis axis) {
  if (a.metric() != b.metric())
    throw Error(ErrorCode::MetricMismatch,
                "'" + a.label() + "' is " + a.metric().label() + ", '" + b.label() + "' is " +
                    b.metric().label());
  const auto [alo, ahi] = curve_range(a, axis);
  const auto [blo, bhi] = curve_range(b, axis);
  const double lo = std::max(alo, blo);
  const double hi = std::min(ahi, bhi);
  if (lo > hi) return OverlapInterval::none(axis);
  return {axis, lo, hi, false};
}

double overlap_fraction(const RdCurve& a, const RdCurve& b, Axis axis) {
  const auto overlap = compute_overlap(a, b, axis);
  if (overlap.empty) return 0.0;
  const auto [alo, ahi] = curve_range(a, axis);
  const auto [blo, bhi] = curve_range(b, axis);
  const double hull = std::max(ahi, bhi) - std::min(alo, blo);
  if (hull <= 0.0) return 1.0;
  return overlap.length() / hull;
}

}  // namespace bdelta
