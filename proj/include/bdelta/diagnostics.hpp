#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bdelta/interp.hpp"
#include "bdelta/rd_model.hpp"

namespace bdelta {

struct BdResult;

enum class Severity { Info, Warn, Error };

enum class LintCode {
  Crossover,
  Tangent,
  LowOverlap,
  MetricRangeDivergence,
  NonMonotone,
  SsimSaturation,
  FewPoints,
  NoOverlap,
  Extrapolated,
};

std::string_view to_string(Severity s) noexcept;
std::string_view to_string(LintCode c) noexcept;

struct Lint {
  LintCode code;
  Severity severity;
  std::string message;

  friend bool operator==(const Lint&, const Lint&) = default;
};

struct LintThresholds {
  double low_overlap = 0.5;               ///< minimum overlap fraction on either axis
  double metric_range_divergence = 0.25;  ///< max 1 - |intersection| / |union| across metrics
  double ssim_saturation_span = 0.01;     ///< minimum SSIM span per curve
  std::size_t few_points = 4;             ///< curves with fewer points are flagged
};

struct DiagnosticsReport {
  std::vector<double> crossovers;  ///< log10(kbps) positions where the curves cross
  std::vector<double> tangents;    ///< log10(kbps) positions where they touch without crossing
  double overlap_fraction_rate = 0.0;
  double overlap_fraction_quality = 0.0;
  std::vector<std::pair<std::string, std::size_t>> monotone_violations;
  std::map<MetricKind, OverlapInterval> per_metric_ranges;
  std::vector<Lint> lints;

  bool has_lint(LintCode code) const;
  /// Highest severity present, Info when there are no lints.
  Severity max_severity() const;
};

/// Number of uniform samples used to bracket sign changes.
inline constexpr std::size_t kCrossoverGrid = 1000;

struct CrossoverScan {
  std::vector<double> crossings;
  std::vector<double> tangents;
};

/// Brackets sign changes of fa - fb on a uniform grid over the interval and
/// refines each by bisection to 1e-9 of the interval width. Isolated touches
/// where the difference reaches zero without changing sign are reported
/// separately as tangents.
CrossoverScan scan_crossovers(const FittedCurve& fa, const FittedCurve& fb,
                              const OverlapInterval& interval,
                              std::size_t grid = kCrossoverGrid);

std::vector<double> find_crossovers(const FittedCurve& fa, const FittedCurve& fb,
                                    const OverlapInterval& interval);

/// Failure-case checks for one anchor/test pair. `results` may hold results
/// for other metrics of the same comparison; their rate spans feed the
/// per-metric range check.
DiagnosticsReport run_lints(const RdCurve& a, const RdCurve& b, std::span<const BdResult> results,
                            const LintThresholds& thresholds = {},
                            FitMethod method = FitMethod::PiecewiseCubic);

}  // namespace bdelta
