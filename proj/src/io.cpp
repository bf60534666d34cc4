#include "bdelta/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "bdelta/error.hpp"
#include "json.hpp"

namespace bdelta {

namespace {

using json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// One CSV record without embedded newlines; fields may be double-quoted.
std::optional<std::vector<std::string>> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && trim(cur).empty()) {
      cur.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(was_quoted ? cur : std::string(trim(cur)));
  return fields;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos && trim(s) == s) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct Line {
  std::size_t number;
  std::string_view text;
};

// Data lines after the header; comments and blank lines dropped.
std::vector<Line> data_lines(std::string_view text, std::string_view header,
                             std::vector<Line>* comments = nullptr) {
  std::vector<Line> out;
  bool seen_header = false;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const auto raw = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    ++number;
    pos = (end == std::string_view::npos) ? text.size() + 1 : end + 1;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (comments) comments->push_back({number, line});
      continue;
    }
    if (!seen_header) {
      auto fields = split_fields(line);
      std::string joined;
      if (fields) {
        for (std::size_t i = 0; i < fields->size(); ++i) joined += (i ? "," : "") + (*fields)[i];
      }
      if (joined != header)
        throw Error(ErrorCode::UnknownHeader,
                    "expected header '" + std::string(header) + "', got '" + std::string(line) +
                        "'",
                    number);
      seen_header = true;
      continue;
    }
    out.push_back({number, line});
  }
  if (!seen_header)
    throw Error(ErrorCode::UnknownHeader, "missing header '" + std::string(header) + "'");
  return out;
}

std::string metric_text(const MetricKind& m) { return m.label(); }

json interval_json(const OverlapInterval& iv) {
  json j;
  j["axis"] = iv.axis == Axis::Rate ? "log10_rate_kbps" : "quality";
  j["empty"] = iv.empty;
  if (!iv.empty) {
    j["lo"] = iv.lo;
    j["hi"] = iv.hi;
  }
  return j;
}

json diagnostics_json(const DiagnosticsReport& d) {
  json j;
  json cx = json::array();
  for (double x : d.crossovers) cx.push_back({{"log10_rate_kbps", x}, {"rate_kbps", std::pow(10.0, x)}});
  j["crossovers"] = cx;
  json tg = json::array();
  for (double x : d.tangents) tg.push_back({{"log10_rate_kbps", x}, {"rate_kbps", std::pow(10.0, x)}});
  j["tangents"] = tg;
  j["overlap_fraction_rate"] = d.overlap_fraction_rate;
  j["overlap_fraction_quality"] = d.overlap_fraction_quality;
  json mv = json::array();
  for (const auto& [label, idx] : d.monotone_violations) mv.push_back({{"curve", label}, {"index", idx}});
  j["monotone_violations"] = mv;
  json ranges = json::array();
  for (const auto& [metric, iv] : d.per_metric_ranges) {
    json r;
    r["metric"] = metric_text(metric);
    r["range"] = interval_json(iv);
    ranges.push_back(r);
  }
  j["per_metric_ranges"] = ranges;
  json lints = json::array();
  for (const auto& l : d.lints)
    lints.push_back({{"code", to_string(l.code)}, {"severity", to_string(l.severity)}, {"message", l.message}});
  j["lints"] = lints;
  return j;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json plot_json(const PlotSeries& p) {
  json j;
  j["sequence"] = p.sequence;
  j["metric"] = metric_text(p.metric);
  j["curve_a"] = p.label_a;
  j["curve_b"] = p.label_b;
  j["orientation"] =
      p.orientation == Orientation::QualityOfLogRate ? "quality_of_log10_rate" : "log10_rate_of_quality";
  json samples = json::array();
  for (const auto& s : p.samples)
    samples.push_back({{"x", s.x}, {"a", optional_number(s.a)}, {"b", optional_number(s.b)}});
  j["samples"] = samples;
  auto knots = [](const auto& ks) {
    json arr = json::array();
    for (const auto& [x, y] : ks) arr.push_back({{"x", x}, {"y", y}});
    return arr;
  };
  j["knots_a"] = knots(p.knots_a);
  j["knots_b"] = knots(p.knots_b);
  j["overlap"] = interval_json(p.overlap);
  j["crossovers"] = p.crossovers;
  return j;
}

std::string lint_codes(const DiagnosticsReport& d) {
  std::string out;
  for (const auto& l : d.lints) {
    if (!out.empty()) out += ';';
    out += to_string(l.code);
  }
  return out;
}

std::string result_kind_label(const ReportEntry& e) {
  std::string s(to_string(e.result.kind));
  if (e.pdf_weighted) s += "(p)";
  return s;
}

std::string emit_json(const ReportDocument& doc) {
  json j;
  j["bd_report_version"] = kReportVersion;
  json results = json::array();
  for (const auto& e : doc.results) {
    const auto& r = e.result;
    json o;
    o["sequence"] = e.sequence;
    o["anchor"] = e.anchor;
    o["test"] = e.test;
    o["metric"] = metric_text(r.metric);
    o["kind"] = to_string(r.kind);
    o["pdf_weighted"] = e.pdf_weighted;
    o["method"] = to_string(r.method);
    o["mode"] = to_string(r.mode);
    o["value"] = r.value;
    o["display"] = display_value(r.kind, r.value);
    o["extrapolated"] = to_string(r.extrapolated);
    o["interval_used"] = interval_json(r.interval_used);
    o["rate_span"] = interval_json(r.rate_span);
    o["diagnostics"] = diagnostics_json(r.diagnostics);
    results.push_back(o);
  }
  j["results"] = results;
  json aggs = json::array();
  for (const auto& a : doc.aggregates) {
    json o;
    o["anchor"] = a.anchor;
    o["test"] = a.test;
    o["metric"] = metric_text(a.metric);
    o["kind"] = to_string(a.aggregate.kind);
    o["pdf_weighted"] = a.pdf_weighted;
    o["method"] = to_string(a.aggregate.method);
    o["mode"] = to_string(a.aggregate.mode);
    o["count"] = a.aggregate.count;
    o["mean"] = a.aggregate.mean;
    o["min"] = a.aggregate.min;
    o["max"] = a.aggregate.max;
    o["display"] = display_value(a.aggregate.kind, a.aggregate.mean);
    aggs.push_back(o);
  }
  j["aggregates"] = aggs;
  json diags = json::array();
  for (const auto& d : doc.diagnostics) {
    json o;
    o["sequence"] = d.sequence;
    o["anchor"] = d.anchor;
    o["test"] = d.test;
    o["metric"] = metric_text(d.metric);
    o["report"] = diagnostics_json(d.report);
    diags.push_back(o);
  }
  j["diagnostics"] = diags;
  json plots = json::array();
  for (const auto& p : doc.plot_series) plots.push_back(plot_json(p));
  j["plot_series"] = plots;
  return j.dump(2) + "\n";
}

std::string md_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else out.push_back(c);
  }
  return out;
}

std::string emit_markdown(const ReportDocument& doc) {
  std::ostringstream os;
  os << "# BD report\n\n";

  std::set<MetricKind> metrics;
  for (const auto& e : doc.results) metrics.insert(e.result.metric);

  if (doc.results.empty() && doc.diagnostics.empty() && doc.plot_series.empty())
    os << "_No results._\n";

  for (const auto& metric : metrics) {
    std::vector<std::string> sequences;
    using RowKey = std::tuple<std::string, std::string, std::string, std::string, bool>;
    std::vector<RowKey> rows;
    std::map<std::tuple<RowKey, std::string, std::string>, std::string> cells;
    std::vector<std::string> kinds;
    for (const auto& e : doc.results) {
      if (e.result.metric != metric) continue;
      if (std::find(sequences.begin(), sequences.end(), e.sequence) == sequences.end())
        sequences.push_back(e.sequence);
      const auto kind = result_kind_label(e);
      if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) kinds.push_back(kind);
      RowKey key{e.anchor + " -> " + e.test, std::string(to_string(e.result.method)),
                 std::string(to_string(e.result.mode)), "", false};
      if (std::find(rows.begin(), rows.end(), key) == rows.end()) rows.push_back(key);
      cells[{key, e.sequence, kind}] = display_value(e.result.kind, e.result.value);
    }
    os << "## " << md_escape(metric.label()) << "\n\n| Comparison | Method | Mode |";
    for (const auto& s : sequences)
      for (const auto& k : kinds) os << ' ' << md_escape(s) << ' ' << k << " |";
    os << "\n|---|---|---|";
    for (std::size_t i = 0; i < sequences.size() * kinds.size(); ++i) os << "---:|";
    os << '\n';
    for (const auto& row : rows) {
      os << "| " << md_escape(std::get<0>(row)) << " | " << std::get<1>(row) << " | "
         << std::get<2>(row) << " |";
      for (const auto& s : sequences)
        for (const auto& k : kinds) {
          auto it = cells.find({row, s, k});
          os << ' ' << (it == cells.end() ? "-" : it->second) << " |";
        }
      os << '\n';
    }
    os << '\n';
  }

  if (!doc.aggregates.empty()) {
    os << "## Averages\n\n| Comparison | Metric | Kind | Method | Mode | Count | Mean | Min | Max |\n"
          "|---|---|---|---|---|---:|---:|---:|---:|\n";
    for (const auto& a : doc.aggregates) {
      const auto& g = a.aggregate;
      os << "| " << md_escape(a.anchor + " -> " + a.test) << " | " << md_escape(a.metric.label())
         << " | " << to_string(g.kind) << (a.pdf_weighted ? "(p)" : "") << " | "
         << to_string(g.method) << " | " << to_string(g.mode) << " | " << g.count << " | "
         << display_value(g.kind, g.mean) << " | " << display_value(g.kind, g.min) << " | "
         << display_value(g.kind, g.max) << " |\n";
    }
    os << '\n';
  }

  bool lint_header = false;
  auto lint_rows = [&](const std::string& seq, const MetricKind& metric, const DiagnosticsReport& d,
                       std::set<std::string>& seen) {
    for (const auto& l : d.lints) {
      std::string row = "| " + md_escape(seq) + " | " + md_escape(metric.label()) + " | " +
                        std::string(to_string(l.severity)) + " | " +
                        std::string(to_string(l.code)) + " | " + md_escape(l.message) + " |\n";
      if (!seen.insert(row).second) continue;
      if (!lint_header) {
        os << "## Diagnostics\n\n| Sequence | Metric | Severity | Code | Message |\n"
              "|---|---|---|---|---|\n";
        lint_header = true;
      }
      os << row;
    }
  };
  std::set<std::string> seen;
  for (const auto& e : doc.results) lint_rows(e.sequence, e.result.metric, e.result.diagnostics, seen);
  for (const auto& d : doc.diagnostics) lint_rows(d.sequence, d.metric, d.report, seen);
  if (lint_header) os << '\n';

  for (const auto& p : doc.plot_series) {
    os << "## Plot data: " << md_escape(p.sequence) << ' ' << md_escape(p.metric.label()) << "\n\n"
       << "| x | " << md_escape(p.label_a) << " | " << md_escape(p.label_b) << " |\n|---:|---:|---:|\n";
    for (const auto& s : p.samples)
      os << "| " << format_number(s.x) << " | " << (s.a ? format_number(*s.a) : "-") << " | "
         << (s.b ? format_number(*s.b) : "-") << " |\n";
    os << '\n';
  }
  return os.str();
}

std::string emit_results_csv(const ReportDocument& doc) {
  std::ostringstream os;
  os << "sequence,anchor,test,metric,kind,pdf_weighted,method,mode,value,display,interval_axis,"
        "interval_lo,interval_hi,extrapolated,lints\n";
  for (const auto& e : doc.results) {
    const auto& r = e.result;
    os << csv_field(e.sequence) << ',' << csv_field(e.anchor) << ',' << csv_field(e.test) << ','
       << csv_field(r.metric.label()) << ',' << to_string(r.kind) << ','
       << (e.pdf_weighted ? "true" : "false") << ',' << to_string(r.method) << ','
       << to_string(r.mode) << ',' << format_number(r.value) << ','
       << csv_field(display_value(r.kind, r.value)) << ','
       << (r.interval_used.axis == Axis::Rate ? "log10_rate_kbps" : "quality") << ','
       << (r.interval_used.empty ? "" : format_number(r.interval_used.lo)) << ','
       << (r.interval_used.empty ? "" : format_number(r.interval_used.hi)) << ','
       << to_string(r.extrapolated) << ',' << csv_field(lint_codes(r.diagnostics)) << '\n';
  }
  return os.str();
}

std::string emit_lints_csv(const ReportDocument& doc) {
  std::ostringstream os;
  os << "sequence,anchor,test,metric,code,severity,message\n";
  for (const auto& d : doc.diagnostics)
    for (const auto& l : d.report.lints)
      os << csv_field(d.sequence) << ',' << csv_field(d.anchor) << ',' << csv_field(d.test) << ','
         << csv_field(d.metric.label()) << ',' << to_string(l.code) << ',' << to_string(l.severity)
         << ',' << csv_field(l.message) << '\n';
  return os.str();
}

}  // namespace

const std::vector<RdPoint>* MeasurementTable::find(const std::string& sequence,
                                                   const std::string& codec,
                                                   const MetricKind& metric) const {
  auto s = sequences.find(sequence);
  if (s == sequences.end()) return nullptr;
  auto c = s->second.find(codec);
  if (c == s->second.end()) return nullptr;
  auto m = c->second.find(metric);
  if (m == c->second.end()) return nullptr;
  return &m->second;
}

std::size_t MeasurementTable::curve_count() const {
  std::size_t n = 0;
  for (const auto& [_, codecs] : sequences)
    for (const auto& [__, metrics] : codecs) n += metrics.size();
  return n;
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

MeasurementTable parse_csv(std::string_view text) {
  MeasurementTable table;
  std::map<std::tuple<std::string, std::string, MetricKind, double>, std::size_t> seen;
  for (const auto& line : data_lines(text, kMeasurementHeader)) {
    const auto fields = split_fields(line.text);
    if (!fields || fields->size() != 5)
      throw Error(ErrorCode::MalformedRow,
                  "line " + std::to_string(line.number) + ": expected 5 fields", line.number);
    const auto& f = *fields;
    if (f[0].empty() || f[1].empty() || f[2].empty())
      throw Error(ErrorCode::MalformedRow,
                  "line " + std::to_string(line.number) + ": empty sequence, codec or metric",
                  line.number);
    const auto rate = parse_number(f[3]);
    if (!rate)
      throw Error(ErrorCode::NonNumericField,
                  "line " + std::to_string(line.number) + ": rate_kbps '" + f[3] + "'", line.number);
    const auto quality = parse_number(f[4]);
    if (!quality)
      throw Error(ErrorCode::NonNumericField,
                  "line " + std::to_string(line.number) + ": quality '" + f[4] + "'", line.number);
    if (*rate <= 0.0)
      throw Error(ErrorCode::NonPositiveRate,
                  "line " + std::to_string(line.number) + ": rate must be positive", line.number);
    const auto metric = MetricKind::from_name(f[2]);
    const auto key = std::make_tuple(f[0], f[1], metric, *rate);
    if (auto [it, inserted] = seen.emplace(key, line.number); !inserted)
      throw Error(ErrorCode::MalformedRow,
                  "line " + std::to_string(line.number) + " duplicates line " +
                      std::to_string(it->second) + " (" + f[0] + ", " + f[1] + ", " +
                      metric.label() + ", " + f[3] + " kbps)",
                  line.number, it->second);
    table.sequences[f[0]][f[1]][metric].push_back({*rate, *quality});
  }
  for (auto& [_, codecs] : table.sequences)
    for (auto& [__, metrics] : codecs)
      for (auto& [___, points] : metrics)
        std::stable_sort(points.begin(), points.end(),
                         [](const RdPoint& a, const RdPoint& b) { return a.rate_kbps < b.rate_kbps; });
  return table;
}

std::string emit_csv(const MeasurementTable& table) {
  std::string out(kMeasurementHeader);
  out += '\n';
  for (const auto& [seq, codecs] : table.sequences)
    for (const auto& [codec, metrics] : codecs)
      for (const auto& [metric, points] : metrics)
        for (const auto& p : points)
          out += csv_field(seq) + ',' + csv_field(codec) + ',' + csv_field(metric.label()) + ',' +
                 format_number(p.rate_kbps) + ',' + format_number(p.quality) + '\n';
  return out;
}

RatePdf parse_pdf_csv(std::string_view text) {
  std::vector<Line> comments;
  const auto lines = data_lines(text, kPdfHeader, &comments);
  PdfDensity density = PdfDensity::LinearRate;
  for (const auto& c : comments) {
    auto body = trim(c.text.substr(1));
    if (body.rfind("density:", 0) != 0) continue;
    const auto value = trim(body.substr(8));
    if (value == "log10")
      density = PdfDensity::LogRate;
    else if (value == "linear")
      density = PdfDensity::LinearRate;
    else
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(c.number) +
                                               ": unknown density '" + std::string(value) + "'",
                  c.number);
  }
  std::vector<PdfBin> bins;
  for (const auto& line : lines) {
    const auto fields = split_fields(line.text);
    if (!fields || fields->size() != 3)
      throw Error(ErrorCode::MalformedRow,
                  "line " + std::to_string(line.number) + ": expected 3 fields", line.number);
    std::array<double, 3> v{};
    for (std::size_t i = 0; i < 3; ++i) {
      const auto n = parse_number((*fields)[i]);
      if (!n)
        throw Error(ErrorCode::NonNumericField,
                    "line " + std::to_string(line.number) + ": '" + (*fields)[i] + "'", line.number);
      v[i] = *n;
    }
    if (v[2] < 0.0)
      throw Error(ErrorCode::NegativeMass, "line " + std::to_string(line.number), line.number);
    bins.push_back({v[0], v[1], v[2]});
  }
  if (bins.empty()) throw Error(ErrorCode::EmptyPdf, "pdf has no bins");
  std::stable_sort(bins.begin(), bins.end(),
                   [](const PdfBin& a, const PdfBin& b) { return a.rate_lo_kbps < b.rate_lo_kbps; });
  return RatePdf::from_bins(std::move(bins), density);
}

std::string emit_pdf_csv(const RatePdf& pdf) {
  std::string out;
  if (pdf.density() == PdfDensity::LogRate) out += "# density: log10\n";
  out += kPdfHeader;
  out += '\n';
  for (const auto& b : pdf.bins())
    out += format_number(b.rate_lo_kbps) + ',' + format_number(b.rate_hi_kbps) + ',' +
           format_number(b.mass) + '\n';
  return out;
}

std::string display_value(BdKind kind, double value) {
  char buf[64];
  if (!std::isfinite(value)) return format_number(value);
  if (kind == BdKind::Rate) {
    std::snprintf(buf, sizeof buf, "%.1f", value);
    std::string s(buf);
    if (s == "-0.0") s = "0.0";
    return s + "%";
  }
  std::snprintf(buf, sizeof buf, "%.2f", value);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string emit_report(const ReportDocument& doc, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return emit_json(doc);
    case ReportFormat::Markdown: return emit_markdown(doc);
    case ReportFormat::Csv:
      if (doc.results.empty() && !doc.diagnostics.empty()) return emit_lints_csv(doc);
      if (doc.results.empty() && !doc.plot_series.empty()) return plot_series_csv(doc.plot_series);
      return emit_results_csv(doc);
  }
  return {};
}

PlotSeries emit_plot_data(const FittedCurve& a, const FittedCurve& b,
                          const OverlapInterval& interval, std::size_t n) {
  if (n < 2) n = 2;
  PlotSeries p;
  p.orientation = a.orientation();
  p.overlap = interval;
  const double lo = std::min(a.lo(), b.lo());
  const double hi = std::max(a.hi(), b.hi());
  p.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (i + 1 == n) ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    PlotSample s{x, std::nullopt, std::nullopt};
    if (a.covers(x)) s.a = evaluate(a, x);
    if (b.covers(x)) s.b = evaluate(b, x);
    p.samples.push_back(s);
  }
  for (std::size_t i = 0; i < a.data_x().size(); ++i) p.knots_a.emplace_back(a.data_x()[i], a.data_y()[i]);
  for (std::size_t i = 0; i < b.data_x().size(); ++i) p.knots_b.emplace_back(b.data_x()[i], b.data_y()[i]);
  if (interval.has_extent() && a.covers(interval.lo) && a.covers(interval.hi) &&
      b.covers(interval.lo) && b.covers(interval.hi))
    p.crossovers = find_crossovers(a, b, interval);
  return p;
}

std::string plot_series_csv(const std::vector<PlotSeries>& series) {
  std::string out = "sequence,metric,kind,curve,x,y\n";
  for (const auto& p : series) {
    const auto prefix = csv_field(p.sequence) + ',' + csv_field(p.metric.label()) + ',';
    for (const auto& s : p.samples) {
      if (s.a) out += prefix + "sample," + csv_field(p.label_a) + ',' + format_number(s.x) + ',' + format_number(*s.a) + '\n';
      if (s.b) out += prefix + "sample," + csv_field(p.label_b) + ',' + format_number(s.x) + ',' + format_number(*s.b) + '\n';
    }
    for (const auto& [x, y] : p.knots_a)
      out += prefix + "knot," + csv_field(p.label_a) + ',' + format_number(x) + ',' + format_number(y) + '\n';
    for (const auto& [x, y] : p.knots_b)
      out += prefix + "knot," + csv_field(p.label_b) + ',' + format_number(x) + ',' + format_number(y) + '\n';
    if (!p.overlap.empty) {
      out += prefix + "overlap_lo,," + format_number(p.overlap.lo) + ",\n";
      out += prefix + "overlap_hi,," + format_number(p.overlap.hi) + ",\n";
    }
    for (double x : p.crossovers) out += prefix + "crossover,," + format_number(x) + ",\n";
  }
  return out;
}

}  // namespace bdelta
