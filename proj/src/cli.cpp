#include "bdelta/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "bdelta/bd_engine.hpp"
#include "bdelta/diagnostics.hpp"
#include "bdelta/error.hpp"
#include "bdelta/io.hpp"

namespace bdelta::cli {

namespace {

struct Config {
  std::string command;
  std::string input;
  std::string anchor;
  std::string test;
  std::vector<std::string> metrics;
  std::vector<std::string> sequences;
  std::string method = "pchip";
  std::string mode = "none";
  std::string pdf;
  std::string format = "json";
  bool permissive = false;
  bool strict = false;
  bool rate_only = false;
  bool extend_tails = false;
  std::size_t samples = 200;
  LintThresholds thresholds;
};

struct UsageFailure {
  std::string message;
};

FitMethod parse_method(const std::string& s) {
  if (s == "cubic") return FitMethod::CubicFit;
  if (s == "pchip") return FitMethod::PiecewiseCubic;
  throw UsageFailure{"unknown --method '" + s + "' (cubic|pchip)"};
}

BdMode parse_mode(const std::string& s) {
  static const std::map<std::string, BdMode> modes = {
      {"none", BdMode::None},           {"low", BdMode::Low},
      {"high", BdMode::High},           {"both", BdMode::Both},
      {"low-always", BdMode::LowAlways}, {"high-always", BdMode::HighAlways},
      {"both-always", BdMode::BothAlways}};
  auto it = modes.find(s);
  if (it == modes.end()) throw UsageFailure{"unknown --mode '" + s + "'"};
  return it->second;
}

ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "md" || s == "markdown") return ReportFormat::Markdown;
  if (s == "csv") return ReportFormat::Csv;
  throw UsageFailure{"unknown --format '" + s + "' (json|md|csv)"};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::EmptyInput, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Session {
 public:
  Session(const Config& cfg, std::ostream& err, const Environment& env)
      : cfg_(cfg), err_(err), color_(env.color_capable && !env.no_color) {}

  int execute(std::ostream& out);

 private:
  struct Pair {
    std::string sequence;
    MetricKind metric;
    RdCurve anchor;
    RdCurve test;
  };

  std::vector<Pair> pairs(const MeasurementTable& table) const;
  std::vector<ReportEntry> compute_sequence(const std::vector<const Pair*>& group,
                                            const std::optional<RatePdf>& pdf) const;
  void note(const std::string& where, const Lint& lint);
  int lint_status() const;

  const Config& cfg_;
  std::ostream& err_;
  bool color_;
  std::set<std::string> seen_;
  Severity worst_ = Severity::Info;
  bool any_lint_ = false;
};

std::vector<Session::Pair> Session::pairs(const MeasurementTable& table) const {
  std::set<MetricKind> wanted;
  for (const auto& m : cfg_.metrics) wanted.insert(MetricKind::from_name(m));
  std::vector<Pair> out;
  for (const auto& [seq, codecs] : table.sequences) {
    if (!cfg_.sequences.empty() &&
        std::find(cfg_.sequences.begin(), cfg_.sequences.end(), seq) == cfg_.sequences.end())
      continue;
    auto a = codecs.find(cfg_.anchor);
    auto b = codecs.find(cfg_.test);
    if (a == codecs.end() || b == codecs.end()) continue;
    for (const auto& [metric, points] : a->second) {
      if (!wanted.empty() && !wanted.count(metric)) continue;
      auto tp = b->second.find(metric);
      if (tp == b->second.end()) continue;
      const bool allow = cfg_.permissive;
      out.push_back({seq, metric, validate_curve(cfg_.anchor, points, metric, allow),
                     validate_curve(cfg_.test, tp->second, metric, allow)});
    }
  }
  if (out.empty())
    throw Error(ErrorCode::EmptyInput, "no " +
                                           (cfg_.metrics.empty() ? std::string("")
                                                                 : std::string("matching ")) +
                                           "curves for anchor '" + cfg_.anchor + "' and test '" +
                                           cfg_.test + "'");
  return out;
}

std::vector<ReportEntry> Session::compute_sequence(const std::vector<const Pair*>& group,
                                                   const std::optional<RatePdf>& pdf) const {
  const auto method = parse_method(cfg_.method);
  const auto mode = parse_mode(cfg_.mode);
  std::vector<ReportEntry> entries;
  std::vector<BdResult> all;
  std::vector<std::size_t> owner;
  std::vector<Lint> missing(group.size());
  std::vector<bool> has_missing(group.size(), false);
  for (std::size_t g = 0; g < group.size(); ++g) {
    const auto& p = *group[g];
    auto add = [&](BdResult r, bool weighted) {
      entries.push_back({p.sequence, cfg_.anchor, cfg_.test, weighted, {}});
      all.push_back(std::move(r));
      owner.push_back(g);
    };
    add(bd_rate_with_mode(p.anchor, p.test, method, mode, cfg_.thresholds), false);
    if (cfg_.rate_only) continue;
    try {
      add(bd_quality(p.anchor, p.test, method, cfg_.thresholds), false);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoOverlap) throw;
      missing[g] = {LintCode::NoOverlap, Severity::Error,
                    "BD-Quality for " + p.metric.label() +
                        ": curves share no bitrate range; not computed"};
      has_missing[g] = true;
      continue;
    }
    if (pdf) {
      WeightedOptions opts{cfg_.extend_tails, cfg_.thresholds};
      add(bd_quality_weighted(p.anchor, p.test, method, *pdf, opts), true);
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& p = *group[owner[i]];
    all[i].diagnostics = run_lints(p.anchor, p.test, all, cfg_.thresholds, all[i].method);
    if (has_missing[owner[i]]) all[i].diagnostics.lints.push_back(missing[owner[i]]);
    entries[i].result = all[i];
  }
  return entries;
}

void Session::note(const std::string& where, const Lint& lint) {
  std::string line = where + ": " + std::string(to_string(lint.code)) + ": " + lint.message;
  if (!seen_.insert(line).second) return;
  any_lint_ = true;
  Severity sev = lint.severity;
  if (cfg_.strict && sev == Severity::Warn) sev = Severity::Error;
  worst_ = std::max(worst_, sev);
  const char* tag = sev == Severity::Error ? "error" : sev == Severity::Warn ? "warning" : "note";
  const char* ansi = sev == Severity::Error ? "\x1b[31m" : sev == Severity::Warn ? "\x1b[33m" : "\x1b[36m";
  if (color_)
    err_ << ansi << tag << "\x1b[0m: " << line << '\n';
  else
    err_ << tag << ": " << line << '\n';
}

int Session::lint_status() const { return worst_ == Severity::Error ? kExitLint : kExitOk; }

int Session::execute(std::ostream& out) {
  if (cfg_.input.empty()) throw UsageFailure{"--input is required"};
  if (cfg_.anchor.empty() || cfg_.test.empty())
    throw UsageFailure{"--anchor and --test are required"};
  if (cfg_.anchor == cfg_.test) throw UsageFailure{"--anchor and --test must differ"};
  if (!cfg_.pdf.empty() && cfg_.command != "compute")
    throw UsageFailure{"--pdf is only valid with compute"};
  if (cfg_.rate_only && cfg_.command != "compute" && cfg_.command != "batch")
    throw UsageFailure{"--rate-only is only valid with compute and batch"};
  if (cfg_.samples < 2) throw UsageFailure{"--samples must be at least 2"};
  const auto method = parse_method(cfg_.method);
  parse_mode(cfg_.mode);
  const auto format = parse_format(cfg_.format);

  const auto input_text = read_file(cfg_.input);
  MeasurementTable table;
  try {
    table = parse_csv(input_text);
  } catch (const Error& e) {
    throw Error(e.code(), cfg_.input + (e.line() ? ":" + std::to_string(*e.line()) : "") + ": " + e.what(),
                e.line(), e.related_line());
  }
  std::optional<RatePdf> pdf;
  if (!cfg_.pdf.empty()) {
    try {
      pdf = parse_pdf_csv(read_file(cfg_.pdf));
    } catch (const Error& e) {
      throw Error(e.code(), cfg_.pdf + (e.line() ? ":" + std::to_string(*e.line()) : "") + ": " + e.what(),
                  e.line(), e.related_line());
    }
  }

  const auto all_pairs = pairs(table);
  ReportDocument doc;

  if (cfg_.command == "compute" || cfg_.command == "batch") {
    std::map<std::string, std::vector<const Pair*>> by_sequence;
    for (const auto& p : all_pairs) by_sequence[p.sequence].push_back(&p);
    for (const auto& [seq, group] : by_sequence) {
      auto entries = compute_sequence(group, pdf);
      doc.results.insert(doc.results.end(), entries.begin(), entries.end());
    }
    if (cfg_.command == "batch") {
      std::map<std::tuple<MetricKind, BdKind, bool>, std::vector<BdResult>> groups;
      for (const auto& e : doc.results)
        if (!e.result.interval_used.empty)
          groups[{e.result.metric, e.result.kind, e.pdf_weighted}].push_back(e.result);
      for (const auto& [key, rs] : groups)
        doc.aggregates.push_back({cfg_.anchor, cfg_.test, std::get<0>(key), std::get<2>(key),
                                  aggregate(rs)});
    }
    for (const auto& e : doc.results)
      for (const auto& l : e.result.diagnostics.lints)
        note(e.sequence + " " + e.result.metric.label(), l);
  } else if (cfg_.command == "diagnose") {
    const auto mode = parse_mode(cfg_.mode);
    for (const auto& p : all_pairs) {
      std::vector<BdResult> rs;
      for (const auto& q : all_pairs) {
        if (q.sequence != p.sequence) continue;
        try {
          rs.push_back(bd_rate_with_mode(q.anchor, q.test, method, mode, cfg_.thresholds));
        } catch (const Error&) {
        }
        try {
          rs.push_back(bd_quality(q.anchor, q.test, method, cfg_.thresholds));
        } catch (const Error&) {
        }
      }
      auto report = run_lints(p.anchor, p.test, rs, cfg_.thresholds, method);
      if (!compute_overlap(p.anchor, p.test, Axis::Rate).has_extent() &&
          !report.has_lint(LintCode::NoOverlap))
        report.lints.push_back({LintCode::NoOverlap, Severity::Error,
                                "curves share no bitrate range"});
      for (const auto& l : report.lints) note(p.sequence + " " + p.metric.label(), l);
      doc.diagnostics.push_back({p.sequence, cfg_.anchor, cfg_.test, p.metric, std::move(report)});
    }
  } else if (cfg_.command == "plotdata") {
    for (const auto& p : all_pairs) {
      const auto xa = p.anchor.log_rates();
      const auto ya = p.anchor.qualities();
      const auto xb = p.test.log_rates();
      const auto yb = p.test.qualities();
      const auto fa = fit_curve(method, xa, ya);
      const auto fb = fit_curve(method, xb, yb);
      auto series = emit_plot_data(fa, fb, compute_overlap(p.anchor, p.test, Axis::Rate), cfg_.samples);
      series.sequence = p.sequence;
      series.metric = p.metric;
      series.label_a = cfg_.anchor;
      series.label_b = cfg_.test;
      doc.plot_series.push_back(std::move(series));
    }
  }

  out << emit_report(doc, format);
  return lint_status();
}

int fail(std::ostream& err, const std::string& message, bool color) {
  if (color)
    err << "\x1b[31merror\x1b[0m: " << message << '\n';
  else
    err << "error: " << message << '\n';
  return kExitError;
}

void add_common(CLI::App* sub, Config& cfg, bool with_input_only = false) {
  sub->add_option("--input,-i", cfg.input, "measurement CSV");
  sub->add_option("--anchor,-a", cfg.anchor, "anchor codec label");
  sub->add_option("--test,-t", cfg.test, "test codec label");
  sub->add_option("--metric,-m", cfg.metrics, "metric to evaluate (repeatable; default all)");
  sub->add_option("--sequence,-s", cfg.sequences, "restrict to sequence (repeatable)");
  sub->add_option("--method", cfg.method, "cubic|pchip")->capture_default_str();
  sub->add_option("--format,-f", cfg.format, "json|md|csv")->capture_default_str();
  sub->add_flag("--permissive", cfg.permissive, "accept non-monotone quality");
  sub->add_flag("--strict", cfg.strict, "treat warnings as errors");
  sub->add_option("--low-overlap", cfg.thresholds.low_overlap, "LOW_OVERLAP threshold")
      ->capture_default_str();
  sub->add_option("--range-divergence", cfg.thresholds.metric_range_divergence,
                  "METRIC_RANGE_DIVERGENCE threshold")
      ->capture_default_str();
  sub->add_option("--ssim-span", cfg.thresholds.ssim_saturation_span, "SSIM_SATURATION span")
      ->capture_default_str();
  sub->add_option("--min-points", cfg.thresholds.few_points, "FEW_POINTS threshold")
      ->capture_default_str();
  if (with_input_only) return;
  sub->add_option("--mode", cfg.mode, "none|low|high|both|low-always|high-always|both-always")
      ->capture_default_str();
}

}  // namespace

Environment environment_from_process() {
  Environment env;
  env.no_color = std::getenv("BD_DELTA_NO_COLOR") != nullptr;
  env.color_capable = ::isatty(STDERR_FILENO) != 0;
  return env;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env) {
  Config cfg;
  CLI::App app{"Bjontegaard delta rate and quality between rate-distortion curves", "bd-delta"};
  app.require_subcommand(1);

  auto* compute = app.add_subcommand("compute", "BD-Rate and BD-Quality for one anchor/test pair");
  add_common(compute, cfg);
  compute->add_option("--pdf", cfg.pdf, "rate pdf CSV for weighted BD-Quality");
  compute->add_flag("--rate-only", cfg.rate_only, "omit BD-Quality");
  compute->add_flag("--extend-tails", cfg.extend_tails, "extend fits to cover the pdf support");

  auto* diagnose = app.add_subcommand("diagnose", "lints only");
  add_common(diagnose, cfg);

  auto* batch = app.add_subcommand("batch", "every sequence plus per-metric averages");
  add_common(batch, cfg);
  batch->add_flag("--rate-only", cfg.rate_only, "omit BD-Quality");

  auto* plot = app.add_subcommand("plotdata", "sampled fitted curves");
  add_common(plot, cfg, true);
  plot->add_option("--samples,-n", cfg.samples, "samples per curve")->capture_default_str();

  const bool color = env.color_capable && !env.no_color;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run 'bd-delta --help' for usage\n";
    return kExitUsage;
  }
  for (auto* sub : {compute, diagnose, batch, plot})
    if (sub->parsed()) cfg.command = sub->get_name();

  try {
    Session session(cfg, err, env);
    std::ostringstream report;
    const int status = session.execute(report);
    out << report.str();
    return status;
  } catch (const UsageFailure& u) {
    err << "usage error: " << u.message << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    return fail(err, e.what(), color);
  } catch (const std::exception& e) {
    return fail(err, e.what(), color);
  }
}

}  // namespace bdelta::cli
