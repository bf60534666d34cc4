#include "bdelta/bd_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "bdelta/error.hpp"
#include "bdelta/quadrature.hpp"

namespace bdelta {

namespace {

constexpr double kPdfMassTolerance = 1e-12;
constexpr double kWeightedRelTol = 1e-8;

void require_same_metric(const RdCurve& anchor, const RdCurve& test) {
  if (anchor.metric() != test.metric())
    throw Error(ErrorCode::MetricMismatch, "anchor '" + anchor.label() + "' is " +
                                               anchor.metric().label() + ", test '" +
                                               test.label() + "' is " + test.metric().label());
}

void require_invertible(const RdCurve& c) {
  if (!c.quality_strictly_increasing())
    throw Error(ErrorCode::NonInvertibleCurve,
                "quality of '" + c.label() + "' is not strictly increasing; rate cannot be "
                "expressed as a function of quality");
}

FittedCurve fit_quality_of_rate(const RdCurve& c, FitMethod method) {
  return fit_curve(method, c.log_rates(), c.qualities(), Orientation::QualityOfLogRate);
}

FittedCurve fit_rate_of_quality(const RdCurve& c, FitMethod method) {
  return fit_curve(method, c.qualities(), c.log_rates(), Orientation::LogRateOfQuality);
}

double percent_from_log_gap(double gap) { return 100.0 * (std::pow(10.0, gap) - 1.0); }

OverlapInterval rate_span_of(const FittedCurve& fa, const FittedCurve& ft,
                             const OverlapInterval& quality) {
  const double v[] = {evaluate(fa, quality.lo), evaluate(fa, quality.hi),
                      evaluate(ft, quality.lo), evaluate(ft, quality.hi)};
  return {Axis::Rate, *std::min_element(std::begin(v), std::end(v)),
          *std::max_element(std::begin(v), std::end(v)), false};
}

void attach_diagnostics(BdResult& r, const RdCurve& anchor, const RdCurve& test,
                        const LintThresholds& thresholds) {
  r.diagnostics = run_lints(anchor, test, std::span<const BdResult>(&r, 1), thresholds, r.method);
}

// -100 when the test sits at lower log-rate than the anchor at the endpoints
// nearest the quality gap, +100 otherwise. Ties fall back to which curve lies
// at higher quality.
double no_overlap_sentinel(const RdCurve& anchor, const RdCurve& test) {
  const bool test_above = test.min_quality() >= anchor.max_quality();
  const double test_end = test_above ? test.min_log_rate() : test.max_log_rate();
  const double anchor_end = test_above ? anchor.max_log_rate() : anchor.min_log_rate();
  if (test_end < anchor_end) return -100.0;
  if (test_end > anchor_end) return 100.0;
  return test_above ? -100.0 : 100.0;
}

BdResult integrate_rate_gap(const FittedCurve& fa, const FittedCurve& ft, const RdCurve& anchor,
                            const RdCurve& test, FitMethod method, BdMode mode,
                            const LintThresholds& thresholds) {
  const double lo = std::max(fa.lo(), ft.lo());
  const double hi = std::min(fa.hi(), ft.hi());
  if (!(hi > lo))
    throw Error(ErrorCode::NoOverlap, "quality ranges of '" + anchor.label() + "' and '" +
                                          test.label() + "' do not overlap");
  BdResult r;
  r.kind = BdKind::Rate;
  r.metric = anchor.metric();
  r.method = method;
  r.mode = mode;
  r.interval_used = {Axis::Quality, lo, hi, false};
  const double gap = (integrate(ft, lo, hi) - integrate(fa, lo, hi)) / (hi - lo);
  r.value = percent_from_log_gap(gap);
  r.rate_span = rate_span_of(fa, ft, r.interval_used);

  const bool low = (fa.low_tail() && lo < fa.body_lo()) || (ft.low_tail() && lo < ft.body_lo());
  const bool high =
      (fa.high_tail() && hi > fa.body_hi()) || (ft.high_tail() && hi > ft.body_hi());
  r.extrapolated = low && high ? Extrapolation::Both
                   : low       ? Extrapolation::Low
                   : high      ? Extrapolation::High
                               : Extrapolation::None;
  attach_diagnostics(r, anchor, test, thresholds);
  return r;
}

FittedCurve extend_to(const FittedCurve& f, std::optional<double> lo, std::optional<double> hi) {
  if (lo && !(*lo < f.lo())) lo.reset();
  if (hi && !(*hi > f.hi())) hi.reset();
  if (!lo && !hi) return f;
  return attach_linear_tails(f, lo, hi);
}

std::vector<double> split_points(const FittedCurve& f, double lo, double hi) {
  std::vector<double> pts{lo};
  for (double b : f.breakpoints())
    if (b > lo && b < hi) pts.push_back(b);
  pts.push_back(hi);
  return pts;
}

}  // namespace

std::string_view to_string(BdMode m) noexcept {
  switch (m) {
    case BdMode::None: return "none";
    case BdMode::Low: return "low";
    case BdMode::High: return "high";
    case BdMode::Both: return "both";
    case BdMode::LowAlways: return "low-always";
    case BdMode::HighAlways: return "high-always";
    case BdMode::BothAlways: return "both-always";
  }
  return "none";
}

std::string_view to_string(BdKind k) noexcept { return k == BdKind::Rate ? "BD-Rate" : "BD-Quality"; }

std::string_view to_string(Extrapolation e) noexcept {
  switch (e) {
    case Extrapolation::None: return "none";
    case Extrapolation::Low: return "low";
    case Extrapolation::High: return "high";
    case Extrapolation::Both: return "both";
  }
  return "none";
}

std::string_view to_string(FitMethod m) noexcept {
  return m == FitMethod::CubicFit ? "cubic" : "pchip";
}

BdResult bd_quality(const RdCurve& anchor, const RdCurve& test, FitMethod method,
                    const LintThresholds& thresholds) {
  require_same_metric(anchor, test);
  const auto overlap = compute_overlap(anchor, test, Axis::Rate);
  if (!overlap.has_extent())
    throw Error(ErrorCode::NoOverlap, "rate ranges of '" + anchor.label() + "' and '" +
                                          test.label() + "' do not overlap");
  const auto fa = fit_quality_of_rate(anchor, method);
  const auto ft = fit_quality_of_rate(test, method);

  BdResult r;
  r.kind = BdKind::Quality;
  r.metric = anchor.metric();
  r.method = method;
  r.interval_used = overlap;
  r.rate_span = overlap;
  r.value = (integrate(ft, overlap.lo, overlap.hi) - integrate(fa, overlap.lo, overlap.hi)) /
            overlap.length();
  attach_diagnostics(r, anchor, test, thresholds);
  return r;
}

BdResult bd_rate(const RdCurve& anchor, const RdCurve& test, FitMethod method,
                 const LintThresholds& thresholds) {
  require_same_metric(anchor, test);
  require_invertible(anchor);
  require_invertible(test);
  const auto fa = fit_rate_of_quality(anchor, method);
  const auto ft = fit_rate_of_quality(test, method);
  return integrate_rate_gap(fa, ft, anchor, test, method, BdMode::None, thresholds);
}

BdResult bd_rate_with_mode(const RdCurve& anchor, const RdCurve& test, FitMethod method,
                           BdMode mode, const LintThresholds& thresholds) {
  require_same_metric(anchor, test);
  require_invertible(anchor);
  require_invertible(test);
  auto fa = fit_rate_of_quality(anchor, method);
  auto ft = fit_rate_of_quality(test, method);

  const bool overlapping = compute_overlap(anchor, test, Axis::Quality).has_extent();
  const bool always =
      mode == BdMode::LowAlways || mode == BdMode::HighAlways || mode == BdMode::BothAlways;

  if (mode == BdMode::None || (overlapping && !always)) {
    if (overlapping) return integrate_rate_gap(fa, ft, anchor, test, method, mode, thresholds);
    BdResult r;
    r.kind = BdKind::Rate;
    r.metric = anchor.metric();
    r.method = method;
    r.mode = mode;
    r.interval_used = OverlapInterval::none(Axis::Quality);
    r.rate_span = OverlapInterval::none(Axis::Rate);
    r.value = no_overlap_sentinel(anchor, test);
    attach_diagnostics(r, anchor, test, thresholds);
    return r;
  }

  const double union_lo = std::min(anchor.min_quality(), test.min_quality());
  const double union_hi = std::max(anchor.max_quality(), test.max_quality());
  // The higher-performance curve is the one starting at higher quality; the
  // lower-performance curve is the one ending at lower quality.
  const bool test_is_higher = test.min_quality() > anchor.min_quality();
  const bool test_is_lower = test.max_quality() < anchor.max_quality();

  const bool extend_low =
      mode == BdMode::Low || mode == BdMode::LowAlways || mode == BdMode::Both ||
      mode == BdMode::BothAlways;
  const bool extend_high =
      mode == BdMode::High || mode == BdMode::HighAlways || mode == BdMode::Both ||
      mode == BdMode::BothAlways;

  if (extend_low) {
    if (test_is_higher)
      ft = extend_to(ft, union_lo, std::nullopt);
    else
      fa = extend_to(fa, union_lo, std::nullopt);
  }
  if (extend_high) {
    if (test_is_lower)
      ft = extend_to(ft, std::nullopt, union_hi);
    else
      fa = extend_to(fa, std::nullopt, union_hi);
  }
  return integrate_rate_gap(fa, ft, anchor, test, method, mode, thresholds);
}

RatePdf RatePdf::unnormalized(std::vector<PdfBin> bins, PdfDensity density) {
  if (bins.empty()) throw Error(ErrorCode::EmptyPdf, "pdf has no bins");
  double total = 0.0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const auto& b = bins[i];
    if (!std::isfinite(b.rate_lo_kbps) || !std::isfinite(b.rate_hi_kbps) || !std::isfinite(b.mass))
      throw Error(ErrorCode::NonFiniteValue, "pdf bin " + std::to_string(i));
    if (b.mass < 0.0)
      throw Error(ErrorCode::NegativeMass, "pdf bin " + std::to_string(i) + " has mass " +
                                               std::to_string(b.mass));
    if (!(b.rate_lo_kbps < b.rate_hi_kbps))
      throw Error(ErrorCode::OverlappingBins,
                  "pdf bin " + std::to_string(i) + " has rate_lo >= rate_hi");
    if (b.rate_lo_kbps < 0.0 || (density == PdfDensity::LogRate && b.rate_lo_kbps <= 0.0))
      throw Error(ErrorCode::NonPositiveRate, "pdf bin " + std::to_string(i));
    if (i > 0 && b.rate_lo_kbps < bins[i - 1].rate_hi_kbps)
      throw Error(ErrorCode::OverlappingBins, "pdf bins " + std::to_string(i - 1) + " and " +
                                                  std::to_string(i) + " overlap or are unsorted");
    total += b.mass;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::EmptyPdf, "pdf has zero total mass");

  RatePdf pdf;
  pdf.bins_ = std::move(bins);
  pdf.density_ = density;
  pdf.source_mass_ = total;
  pdf.normalized_ = std::abs(total - 1.0) <= kPdfMassTolerance;
  return pdf;
}

RatePdf RatePdf::from_bins(std::vector<PdfBin> bins, PdfDensity density) {
  return unnormalized(std::move(bins), density).renormalized();
}

RatePdf RatePdf::uniform(double rate_lo_kbps, double rate_hi_kbps, PdfDensity density) {
  return from_bins({{rate_lo_kbps, rate_hi_kbps, 1.0}}, density);
}

double RatePdf::total_mass() const {
  return std::accumulate(bins_.begin(), bins_.end(), 0.0,
                         [](double s, const PdfBin& b) { return s + b.mass; });
}

RatePdf RatePdf::renormalized() const {
  RatePdf out = *this;
  const double total = total_mass();
  for (auto& b : out.bins_) b.mass /= total;
  out.normalized_ = true;
  return out;
}

double weighted_mean_quality(const FittedCurve& f, const RatePdf& pdf) {
  double mean = 0.0;
  for (const auto& bin : pdf.bins()) {
    if (bin.mass == 0.0) continue;
    const double ulo = std::log10(bin.rate_lo_kbps);
    const double uhi = std::log10(bin.rate_hi_kbps);
    const auto cuts = split_points(f, ulo, uhi);
    double integral = 0.0;
    if (pdf.density() == PdfDensity::LogRate) {
      auto q = [&](double u) { return evaluate(f, u); };
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        integral += adaptive_simpson(q, cuts[i], cuts[i + 1], kWeightedRelTol);
      mean += bin.mass * integral / (uhi - ulo);
    } else {
      auto q = [&](double rate) { return evaluate(f, std::log10(rate)); };
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double r0 = (i == 0) ? bin.rate_lo_kbps : std::pow(10.0, cuts[i]);
        const double r1 = (i + 2 == cuts.size()) ? bin.rate_hi_kbps : std::pow(10.0, cuts[i + 1]);
        integral += adaptive_simpson(q, r0, r1, kWeightedRelTol);
      }
      mean += bin.mass * integral / (bin.rate_hi_kbps - bin.rate_lo_kbps);
    }
  }
  return mean;
}

BdResult bd_quality_weighted(const RdCurve& anchor, const RdCurve& test, FitMethod method,
                             const RatePdf& pdf, const WeightedOptions& options) {
  require_same_metric(anchor, test);
  if (!pdf.normalized() || std::abs(pdf.total_mass() - 1.0) > kPdfMassTolerance)
    throw Error(ErrorCode::UnnormalizedPdf,
                "pdf masses sum to " + std::to_string(pdf.total_mass()));

  double support_lo = 0.0;
  double support_hi = 0.0;
  bool any = false;
  for (const auto& b : pdf.bins()) {
    if (b.mass == 0.0) continue;
    if (!any) support_lo = b.rate_lo_kbps;
    support_hi = b.rate_hi_kbps;
    any = true;
  }
  if (!any) throw Error(ErrorCode::EmptyPdf, "pdf has no mass");
  if (support_lo <= 0.0)
    throw Error(ErrorCode::PdfOutsideCurveRange, "pdf support reaches 0 kbps");
  const double ulo = std::log10(support_lo);
  const double uhi = std::log10(support_hi);

  auto fa = fit_quality_of_rate(anchor, method);
  auto ft = fit_quality_of_rate(test, method);
  for (auto* f : {&fa, &ft}) {
    const bool inside = f->covers(ulo) && f->covers(uhi);
    if (inside) continue;
    if (!options.extend_tails)
      throw Error(ErrorCode::PdfOutsideCurveRange,
                  "pdf support [" + std::to_string(support_lo) + ", " + std::to_string(support_hi) +
                      "] kbps exceeds a curve's rate range");
    *f = extend_to(*f, f->covers(ulo) ? std::nullopt : std::optional<double>(ulo),
                   f->covers(uhi) ? std::nullopt : std::optional<double>(uhi));
  }

  BdResult r;
  r.kind = BdKind::Quality;
  r.metric = anchor.metric();
  r.method = method;
  r.interval_used = {Axis::Rate, ulo, uhi, false};
  r.rate_span = r.interval_used;
  r.value = weighted_mean_quality(ft, pdf) - weighted_mean_quality(fa, pdf);
  const bool low = (fa.low_tail() || ft.low_tail());
  const bool high = (fa.high_tail() || ft.high_tail());
  r.extrapolated = low && high ? Extrapolation::Both
                   : low       ? Extrapolation::Low
                   : high      ? Extrapolation::High
                               : Extrapolation::None;
  attach_diagnostics(r, anchor, test, options.thresholds);
  return r;
}

Aggregate aggregate(std::span<const BdResult> results) {
  if (results.empty()) throw Error(ErrorCode::EmptyInput, "no results to aggregate");
  Aggregate agg;
  agg.kind = results.front().kind;
  agg.method = results.front().method;
  agg.mode = results.front().mode;
  agg.min = agg.max = results.front().value;
  double sum = 0.0;
  for (const auto& r : results) {
    if (r.kind != agg.kind || r.method != agg.method || r.mode != agg.mode)
      throw Error(ErrorCode::MixedKinds, "results differ in kind, method or mode");
    sum += r.value;
    agg.min = std::min(agg.min, r.value);
    agg.max = std::max(agg.max, r.value);
  }
  agg.count = results.size();
  agg.mean = sum / static_cast<double>(results.size());
  return agg;
}

}  // namespace bdelta
