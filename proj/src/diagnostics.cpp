#include "bdelta/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "bdelta/bd_engine.hpp"
#include "bdelta/error.hpp"

namespace bdelta {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

// Golden-section search for the minimum of |diff| on [a, b].
std::pair<double, double> minimize_abs(const std::function<double(double)>& diff, double a,
                                       double b, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = std::abs(diff(c));
  double fd = std::abs(diff(d));
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = std::abs(diff(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = std::abs(diff(d));
    }
  }
  const double x = 0.5 * (a + b);
  return {x, std::abs(diff(x))};
}

FittedCurve fit_for_diagnostics(const RdCurve& c, FitMethod method) {
  const auto xs = c.log_rates();
  const auto ys = c.qualities();
  if (method == FitMethod::CubicFit && xs.size() >= 4) return fit_cubic(xs, ys);
  return fit_pchip(xs, ys);
}

OverlapInterval hull(const OverlapInterval& a, const OverlapInterval& b) {
  if (a.empty) return b;
  if (b.empty) return a;
  return {a.axis, std::min(a.lo, b.lo), std::max(a.hi, b.hi), false};
}

}  // namespace

std::string_view to_string(Severity s) noexcept {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Warn: return "warn";
    case Severity::Error: return "error";
  }
  return "info";
}

std::string_view to_string(LintCode c) noexcept {
  switch (c) {
    case LintCode::Crossover: return "CROSSOVER";
    case LintCode::Tangent: return "TANGENT";
    case LintCode::LowOverlap: return "LOW_OVERLAP";
    case LintCode::MetricRangeDivergence: return "METRIC_RANGE_DIVERGENCE";
    case LintCode::NonMonotone: return "NON_MONOTONE";
    case LintCode::SsimSaturation: return "SSIM_SATURATION";
    case LintCode::FewPoints: return "FEW_POINTS";
    case LintCode::NoOverlap: return "NO_OVERLAP";
    case LintCode::Extrapolated: return "EXTRAPOLATED";
  }
  return "UNKNOWN";
}

bool DiagnosticsReport::has_lint(LintCode code) const {
  return std::any_of(lints.begin(), lints.end(), [&](const Lint& l) { return l.code == code; });
}

Severity DiagnosticsReport::max_severity() const {
  Severity s = Severity::Info;
  for (const auto& l : lints) s = std::max(s, l.severity);
  return s;
}

CrossoverScan scan_crossovers(const FittedCurve& fa, const FittedCurve& fb,
                              const OverlapInterval& interval, std::size_t grid) {
  CrossoverScan scan;
  if (!interval.has_extent() || grid < 2) return scan;

  const double lo = interval.lo;
  const double width = interval.hi - interval.lo;
  auto diff = [&](double x) { return evaluate(fa, x) - evaluate(fb, x); };

  std::vector<double> xs(grid), ds(grid);
  double value_scale = 0.0;
  double max_abs_diff = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    xs[i] = (i + 1 == grid) ? interval.hi : lo + width * static_cast<double>(i) / (grid - 1);
    const double va = evaluate(fa, xs[i]);
    const double vb = evaluate(fb, xs[i]);
    ds[i] = va - vb;
    value_scale = std::max({value_scale, std::abs(va), std::abs(vb)});
    max_abs_diff = std::max(max_abs_diff, std::abs(ds[i]));
  }
  const double zero_tol = 1e-9 * std::max(value_scale, 1.0);
  if (max_abs_diff <= zero_tol) return scan;

  const double x_tol = 1e-9 * width;
  std::size_t last = grid;
  for (std::size_t i = 0; i < grid; ++i) {
    const int s = sign_of(ds[i]);
    if (s == 0) continue;
    if (last != grid && s != sign_of(ds[last])) {
      double a = xs[last];
      double b = xs[i];
      double da = ds[last];
      double root = 0.0;
      bool exact = false;
      for (int it = 0; it < 200 && (b - a) > x_tol; ++it) {
        const double m = 0.5 * (a + b);
        const double dm = diff(m);
        if (dm == 0.0) {
          root = m;
          exact = true;
          break;
        }
        if (sign_of(dm) == sign_of(da)) {
          a = m;
          da = dm;
        } else {
          b = m;
        }
      }
      scan.crossings.push_back(exact ? root : 0.5 * (a + b));
    }
    last = i;
  }

  const double step = width / static_cast<double>(grid - 1);
  for (std::size_t i = 1; i + 1 < grid; ++i) {
    const double here = std::abs(ds[i]);
    if (here > std::abs(ds[i - 1]) || here > std::abs(ds[i + 1])) continue;
    const int sl = sign_of(ds[i - 1]);
    const int sr = sign_of(ds[i + 1]);
    if (sl == 0 || sl != sr) continue;
    if (std::abs(ds[i - 1]) <= zero_tol || std::abs(ds[i + 1]) <= zero_tol) continue;
    const auto [x, v] = minimize_abs(diff, xs[i - 1], xs[i + 1], x_tol);
    if (v > zero_tol) continue;
    if (!scan.tangents.empty() && x - scan.tangents.back() < 2.0 * step) continue;
    scan.tangents.push_back(x);
  }
  return scan;
}

std::vector<double> find_crossovers(const FittedCurve& fa, const FittedCurve& fb,
                                    const OverlapInterval& interval) {
  return scan_crossovers(fa, fb, interval).crossings;
}

DiagnosticsReport run_lints(const RdCurve& a, const RdCurve& b, std::span<const BdResult> results,
                            const LintThresholds& thresholds, FitMethod method) {
  DiagnosticsReport report;
  const auto rate_overlap = compute_overlap(a, b, Axis::Rate);
  report.overlap_fraction_rate = overlap_fraction(a, b, Axis::Rate);
  report.overlap_fraction_quality = overlap_fraction(a, b, Axis::Quality);

  if (rate_overlap.has_extent()) {
    const auto fa = fit_for_diagnostics(a, method);
    const auto fb = fit_for_diagnostics(b, method);
    auto scan = scan_crossovers(fa, fb, rate_overlap);
    for (double x : scan.crossings)
      report.lints.push_back({LintCode::Crossover, Severity::Warn,
                              "'" + a.label() + "' and '" + b.label() + "' cross at " +
                                  fmt(std::pow(10.0, x)) +
                                  " kbps; the averaged delta mixes regions where each is better"});
    for (double x : scan.tangents)
      report.lints.push_back({LintCode::Tangent, Severity::Info,
                              "curves touch without crossing at " + fmt(std::pow(10.0, x)) +
                                  " kbps"});
    report.crossovers = std::move(scan.crossings);
    report.tangents = std::move(scan.tangents);
  }

  for (const auto& [axis, fraction] : {std::pair{Axis::Rate, report.overlap_fraction_rate},
                                       std::pair{Axis::Quality, report.overlap_fraction_quality}}) {
    if (fraction < thresholds.low_overlap)
      report.lints.push_back(
          {LintCode::LowOverlap, Severity::Warn,
           std::string(axis == Axis::Rate ? "rate" : "quality") + " overlap fraction " +
               fmt(fraction, 3) + " is below " + fmt(thresholds.low_overlap, 3)});
  }

  for (const RdCurve* c : {&a, &b}) {
    for (auto idx : c->monotone_violations())
      report.monotone_violations.emplace_back(c->label(), idx);
    if (!c->monotone_violations().empty())
      report.lints.push_back(
          {LintCode::NonMonotone, Severity::Warn,
           "quality of '" + c->label() + "' decreases at " +
               std::to_string(c->monotone_violations().size()) + " point(s)" +
               (c->metric().name() == MetricName::MOS
                    ? "; MOS-based BD values are unreliable on non-monotone curves"
                    : "")});
  }

  for (const RdCurve* c : {&a, &b}) {
    if (c->metric().name() != MetricName::SSIM) continue;
    const double span = c->max_quality() - c->min_quality();
    if (span < thresholds.ssim_saturation_span)
      report.lints.push_back({LintCode::SsimSaturation, Severity::Warn,
                              "SSIM of '" + c->label() + "' spans only " + fmt(span, 3) +
                                  "; saturated SSIM makes BD values unstable"});
  }

  for (const RdCurve* c : {&a, &b}) {
    if (c->size() < thresholds.few_points)
      report.lints.push_back({LintCode::FewPoints, Severity::Info,
                              "'" + c->label() + "' has " + std::to_string(c->size()) +
                                  " points"});
  }

  for (const auto& r : results) {
    if (r.rate_span.empty) continue;
    auto& slot = report.per_metric_ranges[r.metric];
    slot = hull(slot, r.rate_span);
  }
  if (!report.per_metric_ranges.count(a.metric()) && !rate_overlap.empty)
    report.per_metric_ranges[a.metric()] = rate_overlap;

  for (auto i = report.per_metric_ranges.begin(); i != report.per_metric_ranges.end(); ++i) {
    for (auto j = std::next(i); j != report.per_metric_ranges.end(); ++j) {
      const auto& x = i->second;
      const auto& y = j->second;
      const double uni = std::max(x.hi, y.hi) - std::min(x.lo, y.lo);
      if (uni <= 0.0) continue;
      const double inter = std::max(0.0, std::min(x.hi, y.hi) - std::max(x.lo, y.lo));
      const double divergence = 1.0 - inter / uni;
      if (divergence > thresholds.metric_range_divergence)
        report.lints.push_back({LintCode::MetricRangeDivergence, Severity::Warn,
                                i->first.label() + " and " + j->first.label() +
                                    " integrate over bitrate ranges differing by " +
                                    fmt(100.0 * divergence, 3) + "% of their union"});
    }
  }

  for (const auto& r : results) {
    if (r.metric != a.metric()) continue;
    if (r.interval_used.empty)
      report.lints.push_back({LintCode::NoOverlap, Severity::Error,
                              std::string(to_string(r.kind)) + " for " + r.metric.label() +
                                  ": curves do not overlap; value is a sentinel"});
    else if (r.extrapolated != Extrapolation::None)
      report.lints.push_back({LintCode::Extrapolated, Severity::Info,
                              std::string(to_string(r.kind)) + " for " + r.metric.label() +
                                  " integrates over linearly extrapolated range (" +
                                  std::string(to_string(r.extrapolated)) + ")"});
  }
  return report;
}

}  // namespace bdelta
