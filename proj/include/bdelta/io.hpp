#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bdelta/bd_engine.hpp"
#include "bdelta/diagnostics.hpp"
#include "bdelta/interp.hpp"
#include "bdelta/rd_model.hpp"

namespace bdelta {

using CurveTable = std::map<MetricKind, std::vector<RdPoint>>;
using CodecTable = std::map<std::string, CurveTable>;

/// sequence -> codec -> metric -> points sorted by rate.
struct MeasurementTable {
  std::map<std::string, CodecTable> sequences;

  const std::vector<RdPoint>* find(const std::string& sequence, const std::string& codec,
                                   const MetricKind& metric) const;
  std::size_t curve_count() const;

  friend bool operator==(const MeasurementTable&, const MeasurementTable&) = default;
};

inline constexpr std::string_view kMeasurementHeader = "sequence,codec,metric,rate_kbps,quality";
inline constexpr std::string_view kPdfHeader = "rate_lo_kbps,rate_hi_kbps,mass";
inline constexpr int kReportVersion = 1;

/// Parses the long-format measurement CSV. Lines starting with '#' and blank
/// lines are skipped. Throws UnknownHeader, MalformedRow, NonNumericField,
/// NonPositiveRate; errors carry the 1-based line number.
MeasurementTable parse_csv(std::string_view text);
std::string emit_csv(const MeasurementTable& table);

/// Parses a pdf CSV and normalizes it. A `# density: log10` comment switches
/// bins to constant density in log-rate.
RatePdf parse_pdf_csv(std::string_view text);
std::string emit_pdf_csv(const RatePdf& pdf);

struct ReportEntry {
  std::string sequence;
  std::string anchor;
  std::string test;
  bool pdf_weighted = false;
  BdResult result;
};

struct AggregateEntry {
  std::string anchor;
  std::string test;
  MetricKind metric;
  bool pdf_weighted = false;
  Aggregate aggregate;
};

struct DiagnosticsEntry {
  std::string sequence;
  std::string anchor;
  std::string test;
  MetricKind metric;
  DiagnosticsReport report;
};

struct PlotSample {
  double x;
  std::optional<double> a;
  std::optional<double> b;
};

struct PlotSeries {
  std::string sequence;
  MetricKind metric;
  std::string label_a = "a";
  std::string label_b = "b";
  Orientation orientation = Orientation::QualityOfLogRate;
  std::vector<PlotSample> samples;
  std::vector<std::pair<double, double>> knots_a;
  std::vector<std::pair<double, double>> knots_b;
  OverlapInterval overlap;
  std::vector<double> crossovers;
};

struct ReportDocument {
  std::vector<ReportEntry> results;
  std::vector<AggregateEntry> aggregates;
  std::vector<DiagnosticsEntry> diagnostics;
  std::vector<PlotSeries> plot_series;
};

enum class ReportFormat { Json, Markdown, Csv };

/// Deterministic rendering: identical documents give identical bytes.
std::string emit_report(const ReportDocument& doc, ReportFormat format);

/// Rounded display string: one decimal and a percent sign for BD-Rate, two
/// decimals for BD-Quality.
std::string display_value(BdKind kind, double value);

/// `n` uniformly spaced samples over the union of both domains plus knot,
/// overlap and crossover markers.
PlotSeries emit_plot_data(const FittedCurve& a, const FittedCurve& b,
                          const OverlapInterval& interval, std::size_t n = 200);

std::string plot_series_csv(const std::vector<PlotSeries>& series);

/// Shortest decimal string that reads back to the same double.
std::string format_number(double v);

}  // namespace bdelta
