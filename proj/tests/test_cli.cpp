#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bdelta/cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using bdelta::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args, bdelta::cli::Environment env = {}) {
  std::ostringstream out, err;
  const int code = run(args, out, err, env);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "bdelta_cli_tests";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

std::string rows(const std::string& seq, const std::string& codec, const std::string& metric,
                 const std::vector<std::pair<double, double>>& pts) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [r, q] : pts) os << seq << ',' << codec << ',' << metric << ',' << r << ',' << q << '\n';
  return os.str();
}

const std::string kHeader = "sequence,codec,metric,rate_kbps,quality\n";

std::string doubled_pair() {
  return kHeader + rows("s", "A", "PSNR", {{100, 30}, {200, 33}, {400, 36}, {800, 39}}) +
         rows("s", "B", "PSNR", {{200, 30}, {400, 33}, {800, 36}, {1600, 39}});
}

std::string crossing_pair() {
  std::vector<std::pair<double, double>> a, b;
  for (double r : {1.0, 1.67, 2.33, 3.0}) {
    a.emplace_back(std::pow(10.0, r), 20 + 10 * r);
    b.emplace_back(std::pow(10.0, r), 30 + 5 * r);
  }
  return kHeader + rows("s", "A", "PSNR", a) + rows("s", "B", "PSNR", b);
}

}  // namespace

TEST_CASE("compute on doubled rates reports BD-Rate and BD-Quality") {
  const auto in = write_temp("doubled.csv", doubled_pair());
  const auto o = invoke({"compute", "--input", in, "--anchor", "A", "--test", "B"});
  CHECK(o.code == 0);
  CHECK(o.err.empty());
  const auto j = nlohmann::json::parse(o.out);
  REQUIRE(j["results"].size() == 2);
  CHECK(j["results"][0]["kind"] == "BD-Rate");
  CHECK(j["results"][0]["display"] == "100.0%");
  CHECK(j["results"][0]["value"].get<double>() == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(j["results"][1]["kind"] == "BD-Quality");
  // 3 dB per octave, so one octave of extra rate costs 3 dB
  CHECK(j["results"][1]["value"].get<double>() == doctest::Approx(-3.0).epsilon(1e-12));

  const auto rate_only = invoke({"compute", "-i", in, "-a", "A", "-t", "B", "--rate-only"});
  CHECK(nlohmann::json::parse(rate_only.out)["results"].size() == 1);
}

TEST_CASE("diagnose on crossing lines") {
  const auto in = write_temp("crossing.csv", crossing_pair());
  const auto o = invoke({"diagnose", "-i", in, "-a", "A", "-t", "B"});
  CHECK(o.code == 0);
  CHECK(o.err.find("CROSSOVER") != std::string::npos);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["results"].empty());
  REQUIRE(j["diagnostics"].size() == 1);
  const auto& cx = j["diagnostics"][0]["report"]["crossovers"];
  REQUIRE(cx.size() == 1);
  CHECK(std::abs(cx[0]["rate_kbps"].get<double>() - 100.0) < 0.1);
  CHECK(invoke({"diagnose", "-i", in, "-a", "A", "-t", "B", "--strict"}).code == 2);
}

TEST_CASE("saturated SSIM is computed with a lint") {
  const auto in = write_temp(
      "ssim.csv", kHeader +
                      rows("s", "A", "SSIM", {{100, 0.990}, {200, 0.992}, {400, 0.994}, {800, 0.995}}) +
                      rows("s", "B", "SSIM", {{100, 0.991}, {200, 0.993}, {400, 0.995}, {800, 0.996}}) +
                      rows("s", "A", "PSNR", {{100, 30}, {200, 33}, {400, 36}, {800, 39}}) +
                      rows("s", "B", "PSNR", {{100, 31}, {200, 34}, {400, 37}, {800, 40}}));
  const auto o = invoke({"compute", "-i", in, "-a", "A", "-t", "B", "--metric", "SSIM"});
  CHECK(o.code == 0);
  CHECK(o.err.find("SSIM_SATURATION") != std::string::npos);
  const auto j = nlohmann::json::parse(o.out);
  REQUIRE(j["results"].size() == 2);
  for (const auto& r : j["results"]) CHECK(r["metric"] == "SSIM");
  CHECK(invoke({"compute", "-i", in, "-a", "A", "-t", "B", "--metric", "SSIM", "--strict"}).code == 2);
  CHECK(nlohmann::json::parse(invoke({"compute", "-i", in, "-a", "A", "-t", "B"}).out)["results"].size() == 4);
}

TEST_CASE("non-monotone MOS needs --permissive") {
  const auto in = write_temp(
      "mos.csv", kHeader + rows("s", "A", "MOS", {{1000, 2.0}, {2000, 3.1}, {4000, 4.4}, {8000, 4.3}}) +
                     rows("s", "B", "MOS", {{1000, 2.2}, {2000, 3.3}, {4000, 4.2}, {8000, 4.5}}));
  const auto strict = invoke({"diagnose", "-i", in, "-a", "A", "-t", "B"});
  CHECK(strict.code == 1);
  CHECK(strict.err.find("NonMonotoneQuality") != std::string::npos);
  const auto loose = invoke({"diagnose", "-i", in, "-a", "A", "-t", "B", "--permissive"});
  CHECK(loose.code == 0);
  CHECK(loose.err.find("NON_MONOTONE") != std::string::npos);
  // rate cannot be a function of a non-monotone quality
  CHECK(invoke({"compute", "-i", in, "-a", "A", "-t", "B", "--permissive"}).code == 1);
}

TEST_CASE("disjoint curves exit with the lint status") {
  const auto in = write_temp(
      "disjoint.csv", kHeader + rows("s", "A", "PSNR", {{100, 30}, {200, 33}, {400, 36}, {800, 38}}) +
                          rows("s", "B", "PSNR", {{10, 50}, {20, 51}, {40, 52}, {80, 53}}));
  const auto o = invoke({"compute", "-i", in, "-a", "A", "-t", "B"});
  CHECK(o.code == 2);
  CHECK(o.err.find("NO_OVERLAP") != std::string::npos);
  const auto j = nlohmann::json::parse(o.out);
  REQUIRE(j["results"].size() == 1);
  CHECK(j["results"][0]["value"] == -100.0);
}

TEST_CASE("batch averages across sequences") {
  std::string text = kHeader;
  for (const char* s : {"v1", "v2", "v3"}) {
    text += rows(s, "A", "PSNR", {{100, 30}, {200, 33}, {400, 36}, {800, 39}});
  }
  text += rows("v1", "B", "PSNR", {{200, 30}, {400, 33}, {800, 36}, {1600, 39}});
  text += rows("v2", "B", "PSNR", {{50, 30}, {100, 33}, {200, 36}, {400, 39}});
  text += rows("v3", "B", "PSNR", {{100, 30}, {200, 33}, {400, 36}, {800, 39}});
  const auto in = write_temp("batch.csv", text);
  const auto o = invoke({"batch", "-i", in, "-a", "A", "-t", "B"});
  CHECK(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["results"].size() == 6);
  REQUIRE(j["aggregates"].size() == 2);
  const auto& rate = j["aggregates"][0];
  CHECK(rate["kind"] == "BD-Rate");
  CHECK(rate["count"] == 3);
  CHECK(rate["mean"].get<double>() == doctest::Approx((100.0 - 50.0 + 0.0) / 3).epsilon(1e-12));
  CHECK(rate["min"].get<double>() == doctest::Approx(-50.0));
  const auto md = invoke({"batch", "-i", in, "-a", "A", "-t", "B", "--format", "md"});
  CHECK(md.out.find("## Averages") != std::string::npos);
  const auto only = invoke({"batch", "-i", in, "-a", "A", "-t", "B", "-s", "v2"});
  CHECK(nlohmann::json::parse(only.out)["results"].size() == 2);
}

TEST_CASE("plotdata") {
  const auto in = write_temp("crossing_plot.csv", crossing_pair());
  const auto o = invoke({"plotdata", "-i", in, "-a", "A", "-t", "B", "--samples", "5", "-f", "csv"});
  CHECK(o.code == 0);
  CHECK(o.out.rfind("sequence,metric,kind,curve,x,y\n", 0) == 0);
  CHECK(std::count(o.out.begin(), o.out.end(), '\n') == 1 + 10 + 8 + 2 + 1);
  const auto j = nlohmann::json::parse(invoke({"plotdata", "-i", in, "-a", "A", "-t", "B"}).out);
  CHECK(j["plot_series"][0]["samples"].size() == 200);
  CHECK(std::abs(j["plot_series"][0]["crossovers"][0].get<double>() - 2.0) < 1e-8);
}

TEST_CASE("usage errors exit 64") {
  const auto in = write_temp("doubled_usage.csv", doubled_pair());
  CHECK(invoke({}).code == 64);
  CHECK(invoke({"frobnicate"}).code == 64);
  CHECK(invoke({"compute", "-i", in, "-a", "A"}).code == 64);
  CHECK(invoke({"compute", "-i", in, "-a", "A", "-t", "A"}).code == 64);
  CHECK(invoke({"compute", "-i", in, "-a", "A", "-t", "B", "--method", "spline"}).code == 64);
  CHECK(invoke({"compute", "-i", in, "-a", "A", "-t", "B", "--mode", "sideways"}).code == 64);
  CHECK(invoke({"compute", "-i", in, "-a", "A", "-t", "B", "--format", "xml"}).code == 64);
  CHECK(invoke({"diagnose", "-i", in, "-a", "A", "-t", "B", "--pdf", in}).code == 64);
  CHECK(invoke({"plotdata", "-i", in, "-a", "A", "-t", "B", "--samples", "1"}).code == 64);
  CHECK(invoke({"compute", "--bogus"}).code == 64);
  const auto help = invoke({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("compute") != std::string::npos);
}

TEST_CASE("hard errors exit 1 with a source location") {
  CHECK(invoke({"compute", "-i", "/nonexistent/x.csv", "-a", "A", "-t", "B"}).code == 1);
  const auto bad = write_temp("bad.csv", kHeader + "s,A,PSNR,100,30\ns,A,PSNR,abc,31\n");
  const auto o = invoke({"compute", "-i", bad, "-a", "A", "-t", "B"});
  CHECK(o.code == 1);
  CHECK(o.out.empty());
  CHECK(o.err.find(bad + ":3") != std::string::npos);
  const auto in = write_temp("doubled_missing.csv", doubled_pair());
  CHECK(invoke({"compute", "-i", in, "-a", "A", "-t", "Z"}).code == 1);
  CHECK(invoke({"compute", "-i", in, "-a", "A", "-t", "B", "--metric", "VMAF"}).code == 1);
}

TEST_CASE("weighted BD-Quality through --pdf") {
  const auto in = write_temp("doubled_pdf.csv", doubled_pair());
  const auto pdf = write_temp("uniform.csv", "# density: log10\nrate_lo_kbps,rate_hi_kbps,mass\n200,800,1\n");
  const auto o = invoke({"compute", "-i", in, "-a", "A", "-t", "B", "--pdf", pdf});
  CHECK(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  REQUIRE(j["results"].size() == 3);
  CHECK(j["results"][2]["pdf_weighted"] == true);
  CHECK(std::abs(j["results"][2]["value"].get<double>() - j["results"][1]["value"].get<double>()) < 1e-6);
  const auto wide = write_temp("wide.csv", "rate_lo_kbps,rate_hi_kbps,mass\n50,3000,1\n");
  CHECK(invoke({"compute", "-i", in, "-a", "A", "-t", "B", "--pdf", wide}).code == 1);
  CHECK(invoke({"compute", "-i", in, "-a", "A", "-t", "B", "--pdf", wide, "--extend-tails"}).code == 0);
}

TEST_CASE("repeated runs are byte-identical") {
  const auto in = write_temp("crossing_repeat.csv", crossing_pair());
  for (const char* fmt : {"json", "md", "csv"}) {
    const auto a = invoke({"compute", "-i", in, "-a", "A", "-t", "B", "-f", fmt});
    const auto b = invoke({"compute", "-i", in, "-a", "A", "-t", "B", "-f", fmt});
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
    CHECK(!a.out.empty());
  }
}

TEST_CASE("colour only on a capable stream without BD_DELTA_NO_COLOR") {
  const auto in = write_temp("crossing_color.csv", crossing_pair());
  const std::vector<std::string> args{"diagnose", "-i", in, "-a", "A", "-t", "B"};
  CHECK(invoke(args, {false, true}).err.find("\x1b[") != std::string::npos);
  CHECK(invoke(args, {true, true}).err.find("\x1b[") == std::string::npos);
  CHECK(invoke(args, {false, false}).err.find("\x1b[") == std::string::npos);
}
