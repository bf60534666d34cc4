#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bdelta/bd_engine.hpp"
#include "bdelta/cli.hpp"
#include "bdelta/diagnostics.hpp"
#include "bdelta/error.hpp"
#include "bdelta/interp.hpp"
#include "bdelta/io.hpp"
#include "bdelta/rd_model.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace bdelta;

namespace {

std::vector<RdPoint> to_points(const std::vector<std::pair<double, double>>& pts) {
  std::vector<RdPoint> out;
  out.reserve(pts.size());
  for (const auto& [r, q] : pts) out.push_back({r, q});
  return out;
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  cli::Environment env;
  env.no_color = true;
  const int code = cli::run(args, out, err, env);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bjontegaard delta rate and quality";

  static py::exception<Error> bd_error(m, "BdError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = bd_error;
      py::object inst = exc(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      inst.attr("line") = e.line() ? py::cast(*e.line()) : py::none();
      PyErr_SetObject(bd_error.ptr(), inst.ptr());
    }
  });

  py::enum_<MetricName>(m, "MetricName")
      .value("PSNR", MetricName::PSNR)
      .value("SSIM", MetricName::SSIM)
      .value("VMAF", MetricName::VMAF)
      .value("MOS", MetricName::MOS)
      .value("Other", MetricName::Other);
  py::enum_<FitMethod>(m, "FitMethod")
      .value("CubicFit", FitMethod::CubicFit)
      .value("PiecewiseCubic", FitMethod::PiecewiseCubic);
  py::enum_<Orientation>(m, "Orientation")
      .value("QualityOfLogRate", Orientation::QualityOfLogRate)
      .value("LogRateOfQuality", Orientation::LogRateOfQuality);
  py::enum_<BdMode>(m, "BdMode")
      .value("None_", BdMode::None)
      .value("Low", BdMode::Low)
      .value("High", BdMode::High)
      .value("Both", BdMode::Both)
      .value("LowAlways", BdMode::LowAlways)
      .value("HighAlways", BdMode::HighAlways)
      .value("BothAlways", BdMode::BothAlways);
  py::enum_<BdKind>(m, "BdKind").value("Rate", BdKind::Rate).value("Quality", BdKind::Quality);
  py::enum_<Axis>(m, "Axis").value("Rate", Axis::Rate).value("Quality", Axis::Quality);
  py::enum_<PdfDensity>(m, "PdfDensity")
      .value("LinearRate", PdfDensity::LinearRate)
      .value("LogRate", PdfDensity::LogRate);

  py::class_<MetricKind>(m, "MetricKind")
      .def(py::init<MetricName>())
      .def_static("from_name", &MetricKind::from_name)
      .def_property_readonly("name", &MetricKind::name)
      .def_property_readonly("label", &MetricKind::label)
      .def("__eq__", [](const MetricKind& a, const MetricKind& b) { return a == b; })
      .def("__repr__", [](const MetricKind& k) { return "MetricKind(" + k.label() + ")"; });

  py::class_<OverlapInterval>(m, "OverlapInterval")
      .def_readonly("axis", &OverlapInterval::axis)
      .def_readonly("lo", &OverlapInterval::lo)
      .def_readonly("hi", &OverlapInterval::hi)
      .def_readonly("empty", &OverlapInterval::empty);

  py::class_<RdCurve>(m, "RdCurve")
      .def(py::init([](std::string label, const std::vector<std::pair<double, double>>& pts,
                       const MetricKind& metric, bool allow_non_monotone) {
             return validate_curve(std::move(label), to_points(pts), metric, allow_non_monotone);
           }),
           "label"_a, "points"_a, "metric"_a = MetricKind(MetricName::PSNR),
           "allow_non_monotone"_a = false)
      .def_property_readonly("label", &RdCurve::label)
      .def_property_readonly("metric", &RdCurve::metric)
      .def_property_readonly("log_rates", &RdCurve::log_rates)
      .def_property_readonly("qualities", &RdCurve::qualities)
      .def("__len__", &RdCurve::size);

  m.def("compute_overlap", &compute_overlap, "a"_a, "b"_a, "axis"_a);

  py::class_<FittedCurve>(m, "FittedCurve")
      .def_property_readonly("lo", &FittedCurve::lo)
      .def_property_readonly("hi", &FittedCurve::hi)
      .def_property_readonly("coefficients", &FittedCurve::coefficients)
      .def("__call__", [](const FittedCurve& f, double x) { return evaluate(f, x); })
      .def("integrate", [](const FittedCurve& f, double lo, double hi) { return integrate(f, lo, hi); });

  m.def("fit_curve",
        [](FitMethod method, std::vector<double> xs, std::vector<double> ys, Orientation o) {
          return fit_curve(method, xs, ys, o);
        },
        "method"_a, "xs"_a, "ys"_a, "orientation"_a = Orientation::QualityOfLogRate);

  py::class_<Lint>(m, "Lint")
      .def_property_readonly("code", [](const Lint& l) { return std::string(to_string(l.code)); })
      .def_property_readonly("severity", [](const Lint& l) { return std::string(to_string(l.severity)); })
      .def_readonly("message", &Lint::message);

  py::class_<DiagnosticsReport>(m, "DiagnosticsReport")
      .def_readonly("crossovers", &DiagnosticsReport::crossovers)
      .def_readonly("tangents", &DiagnosticsReport::tangents)
      .def_readonly("overlap_fraction_rate", &DiagnosticsReport::overlap_fraction_rate)
      .def_readonly("overlap_fraction_quality", &DiagnosticsReport::overlap_fraction_quality)
      .def_readonly("lints", &DiagnosticsReport::lints)
      .def("has_lint", [](const DiagnosticsReport& d, const std::string& code) {
        for (const auto& l : d.lints)
          if (to_string(l.code) == code) return true;
        return false;
      });

  py::class_<BdResult>(m, "BdResult")
      .def_readonly("kind", &BdResult::kind)
      .def_readonly("value", &BdResult::value)
      .def_readonly("metric", &BdResult::metric)
      .def_readonly("interval_used", &BdResult::interval_used)
      .def_readonly("mode", &BdResult::mode)
      .def_readonly("method", &BdResult::method)
      .def_readonly("diagnostics", &BdResult::diagnostics)
      .def_property_readonly("extrapolated",
                             [](const BdResult& r) { return std::string(to_string(r.extrapolated)); })
      .def_property_readonly("display", [](const BdResult& r) { return display_value(r.kind, r.value); });

  m.def("bd_rate", [](const RdCurve& a, const RdCurve& b, FitMethod method) { return bd_rate(a, b, method); },
        "anchor"_a, "test"_a, "method"_a = FitMethod::PiecewiseCubic);
  m.def("bd_quality",
        [](const RdCurve& a, const RdCurve& b, FitMethod method) { return bd_quality(a, b, method); },
        "anchor"_a, "test"_a, "method"_a = FitMethod::PiecewiseCubic);
  m.def("bd_rate_with_mode",
        [](const RdCurve& a, const RdCurve& b, FitMethod method, BdMode mode) {
          return bd_rate_with_mode(a, b, method, mode);
        },
        "anchor"_a, "test"_a, "method"_a = FitMethod::PiecewiseCubic, "mode"_a = BdMode::None);

  py::class_<RatePdf>(m, "RatePdf")
      .def_static("from_bins",
                  [](const std::vector<std::tuple<double, double, double>>& bins, PdfDensity d) {
                    std::vector<PdfBin> v;
                    for (const auto& [lo, hi, mass] : bins) v.push_back({lo, hi, mass});
                    return RatePdf::from_bins(std::move(v), d);
                  },
                  "bins"_a, "density"_a = PdfDensity::LinearRate)
      .def_static("uniform", &RatePdf::uniform, "rate_lo_kbps"_a, "rate_hi_kbps"_a,
                  "density"_a = PdfDensity::LogRate)
      .def_property_readonly("source_mass", &RatePdf::source_mass)
      .def_property_readonly("total_mass", &RatePdf::total_mass);

  m.def("bd_quality_weighted",
        [](const RdCurve& a, const RdCurve& b, FitMethod method, const RatePdf& pdf, bool extend_tails) {
          return bd_quality_weighted(a, b, method, pdf, WeightedOptions{extend_tails, {}});
        },
        "anchor"_a, "test"_a, "method"_a, "pdf"_a, "extend_tails"_a = false);

  m.def("parse_csv_roundtrip", [](const std::string& text) { return emit_csv(parse_csv(text)); },
        "text"_a, "parse a measurement CSV and emit it back in canonical form");
  m.def("run_cli", &run_cli, "args"_a,
        "run the bd-delta command line in-process; returns (exit_code, stdout, stderr)");
}
