#include <cmath>
#include <random>

#include "bdelta/error.hpp"
#include "bdelta/interp.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bdelta;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected bdelta::Error");
  return ErrorCode::UsageError;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

const std::vector<double> kLogRates = oracle::log10_all({100, 200, 400, 800});

}  // namespace

TEST_CASE("cubic fit of collinear log-rate data recovers the line") {
  std::vector<double> ys;
  for (double x : kLogRates) ys.push_back(10 + 5 * x);
  const auto f = fit_cubic(kLogRates, ys);
  const auto& c = f.coefficients();
  CHECK(c[0] == doctest::Approx(10).epsilon(1e-9));
  CHECK(c[1] == doctest::Approx(5).epsilon(1e-9));
  CHECK(std::abs(c[2]) < 1e-9);
  CHECK(std::abs(c[3]) < 1e-9);
  CHECK(std::abs(evaluate(f, std::log10(200.0)) - 21.50514997831991) < 1e-9);
  CHECK(f.residual_norm() < 1e-9);
}

TEST_CASE("cubic fit of y = x^3 through four points") {
  const std::vector<double> xs{0.5, 1.0, 2.0, 3.5};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(x * x * x);
  const auto f = fit_cubic(xs, ys);
  const auto& c = f.coefficients();
  CHECK(std::abs(c[0]) < 1e-9);
  CHECK(std::abs(c[1]) < 1e-9);
  CHECK(std::abs(c[2]) < 1e-9);
  CHECK(c[3] == doctest::Approx(1).epsilon(1e-9));
}

TEST_CASE("cubic least squares on five points matches a QR oracle") {
  const std::vector<double> xs = oracle::log10_all({100, 200, 400, 800, 1600});
  std::vector<double> ys;
  for (double x : xs) ys.push_back(12 + 7 * x);
  ys[2] += 1.0;
  const auto f = fit_cubic(xs, ys);
  const auto ref = oracle::cubic_least_squares(xs, ys);
  CHECK(f.residual_norm() > 0.1);
  CHECK(rel_err(f.residual_norm(), ref.residual_norm) < 1e-8);
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs(f.coefficients()[k] - ref.coeffs[k]) < 1e-6 * (1 + std::abs(ref.coeffs[k])));
  for (double x : xs) {
    const double want = ref.coeffs[0] + x * (ref.coeffs[1] + x * (ref.coeffs[2] + x * ref.coeffs[3]));
    CHECK(std::abs(evaluate(f, x) - want) < 1e-9);
  }
}

TEST_CASE("cubic fit rejects bad input") {
  const std::vector<double> three{1, 2, 3};
  CHECK(code_of([&] { fit_cubic(three, three); }) == ErrorCode::TooFewPoints);
  const std::vector<double> unsorted{1, 3, 2, 4};
  CHECK(code_of([&] { fit_cubic(unsorted, unsorted); }) == ErrorCode::NonAscendingRate);
  const std::vector<double> one{1};
  CHECK(code_of([&] { fit_pchip(one, one); }) == ErrorCode::TooFewPoints);
  const std::vector<double> xs{1, 2, 3, 4}, ys{1, NAN, 3, 4};
  CHECK(code_of([&] { fit_pchip(xs, ys); }) == ErrorCode::NonFiniteValue);
}

TEST_CASE("four-point cubic interpolates random data") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> step(0.05, 0.5), y(20, 45);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> xs{std::uniform_real_distribution<double>(1.5, 4.5)(rng)};
    for (int i = 0; i < 3; ++i) xs.push_back(xs.back() + step(rng));
    std::vector<double> ys{y(rng), y(rng), y(rng), y(rng)};
    const auto f = fit_cubic(xs, ys);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(evaluate(f, xs[i]) - ys[i]) < 1e-8);
  }
}

TEST_CASE("pchip reproduces linear data") {
  std::vector<double> ys;
  for (double x : kLogRates) ys.push_back(20 + 10 * x);
  const auto f = fit_pchip(kLogRates, ys);
  for (int i = 0; i <= 100; ++i) {
    const double x = kLogRates.front() + (kLogRates.back() - kLogRates.front()) * i / 100.0;
    CHECK(std::abs(evaluate(f, x) - (20 + 10 * x)) < 1e-12);
  }
}

TEST_CASE("pchip on a plateau stays monotone and bounded") {
  const std::vector<double> xs{0, 1, 2, 3}, ys{0, 1, 1, 2};
  const auto f = fit_pchip(xs, ys);
  // scipy.interpolate.PchipInterpolator derivatives at the knots
  const double slopes[] = {1.5, 0.0, 0.0, 1.5};
  for (int i = 0; i < 4; ++i) CHECK(f.knots()[i].slope == doctest::Approx(slopes[i]).epsilon(1e-14));
  double prev = -1;
  for (int i = 0; i <= 3000; ++i) {
    const double v = evaluate(f, 3.0 * i / 3000);
    CHECK(v >= prev - 1e-12);
    CHECK(v >= 0.0);
    CHECK(v <= 2.0);
    prev = v;
  }
}

TEST_CASE("pchip on two points is the chord") {
  const std::vector<double> xs{0, 1}, ys{0, 2};
  const auto f = fit_pchip(xs, ys);
  CHECK(evaluate(f, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(integrate(f, 0, 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pchip agrees with scipy on irregular knots") {
  // values from scipy.interpolate.PchipInterpolator
  const std::vector<double> xs{0, 1, 3, 4.5, 5}, ys{1, 2, 2.5, 5, 5.2};
  const auto f = fit_pchip(xs, ys);
  const double slopes[] = {1.25, 0.42857142857142855, 0.45064377682403434, 0.585365853658537,
                           0.08333333333333381};
  for (int i = 0; i < 5; ++i) CHECK(std::abs(f.knots()[i].slope - slopes[i]) < 1e-12);
  CHECK(std::abs(evaluate(f, 3.7) - 3.612929628466528) < 1e-12);
  CHECK(std::abs(integrate(f, 0.3, 4.8) - 12.828897333940223) < 1e-11);
}

TEST_CASE("pchip agrees with scipy on an RD curve") {
  const std::vector<double> ys{30, 33, 36, 38};
  const auto f = fit_pchip(kLogRates, ys);
  const double slopes[] = {9.96578428466209, 9.96578428466209, 7.97262742772967, 4.98289214233104};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(f.knots()[i].slope - slopes[i]) < 1e-7);
  CHECK(std::abs(evaluate(f, 2.5) - 35.07176163) < 1e-7);
  CHECK(std::abs(integrate(f, kLogRates.front(), kLogRates.back()) - 31.0437183) < 1e-6);
}

TEST_CASE("pchip interpolates knots and keeps monotone data monotone") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    auto pts = oracle::random_curve(rng, 3 + t % 6);
    std::vector<double> xs, ys;
    for (const auto& p : pts) {
      xs.push_back(std::log10(p.rate_kbps));
      ys.push_back(p.quality);
    }
    const auto f = fit_pchip(xs, ys);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(evaluate(f, xs[i]) - ys[i]) < 1e-12);
    double prev = evaluate(f, xs.front());
    for (int i = 1; i <= 10000; ++i) {
      const double v = evaluate(f, xs.front() + (xs.back() - xs.front()) * i / 10000.0);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("evaluate outside the domain") {
  const std::vector<double> xs{1, 2, 3}, ys{1, 2, 3};
  const auto f = fit_pchip(xs, ys);
  CHECK(evaluate(f, 2.0) == doctest::Approx(2.0));
  CHECK(code_of([&] { evaluate(f, 3.5); }) == ErrorCode::OutOfDomain);
  CHECK(code_of([&] { evaluate(f, 0.5); }) == ErrorCode::OutOfDomain);
}

TEST_CASE("closed-form integrals") {
  const std::vector<double> xs{1, 2, 3}, three{3, 3, 3};
  CHECK(integrate(fit_pchip(xs, three), 1, 3) == doctest::Approx(6.0).epsilon(1e-15));
  const std::vector<double> cx{0, 0.5, 1.5, 2};
  std::vector<double> cy;
  for (double x : cx) cy.push_back(x * x * x);
  CHECK(std::abs(integrate(fit_cubic(cx, cy), 0, 2) - 4.0) < 1e-12);
  const auto f = fit_pchip(xs, three);
  CHECK(code_of([&] { integrate(f, 2.5, 1.5); }) == ErrorCode::InvertedInterval);
  CHECK(code_of([&] { integrate(f, 0.0, 1.5); }) == ErrorCode::OutOfDomain);
  CHECK(integrate(f, 2.0, 2.0) == 0.0);
}

TEST_CASE("integration matches composite Simpson and is additive") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 60; ++t) {
    auto pts = oracle::random_curve(rng, 4 + t % 4);
    std::vector<double> xs, ys;
    for (const auto& p : pts) {
      xs.push_back(std::log10(p.rate_kbps));
      ys.push_back(p.quality);
    }
    for (auto method : {FitMethod::CubicFit, FitMethod::PiecewiseCubic}) {
      const auto f = fit_curve(method, xs, ys);
      const double lo = xs.front(), hi = xs.back();
      const double want = oracle::simpson([&](double x) { return evaluate(f, x); }, lo, hi);
      CHECK(rel_err(integrate(f, lo, hi), want) < 1e-8);
      const double mid = lo + 0.37 * (hi - lo);
      const double whole = integrate(f, lo, hi);
      CHECK(std::abs(integrate(f, lo, mid) + integrate(f, mid, hi) - whole) <=
            1e-12 * std::abs(whole));
    }
  }
}

TEST_CASE("linear tails") {
  const std::vector<double> xs{1, 2, 3, 4}, line{5, 7, 9, 11};
  for (auto method : {FitMethod::CubicFit, FitMethod::PiecewiseCubic}) {
    const auto f = attach_linear_tails(fit_curve(method, xs, line), 0.0, std::nullopt);
    CHECK(f.lo() == 0.0);
    CHECK(evaluate(f, 0.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(evaluate(f, 0.5) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(evaluate_derivative(f, 0.25) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate(f, 0.0, 1.0) == doctest::Approx(4.0).epsilon(1e-12));
  }

  // one-sided three-point end slope ((2h1 + h0) d1 - h1 d0) / (h0 + h1), unit spacing
  const std::vector<double> sx{0, 1, 2}, sy{0, 3, 4};
  const auto s = fit_pchip(sx, sy);
  const double m = ((2 * 1 + 1) * 1.0 - 1 * 3.0) / 2.0;
  CHECK(s.body_slope_hi() == doctest::Approx(m).epsilon(1e-15));
  const std::vector<double> sy2{0, 1, 3};
  const auto s2 = fit_pchip(sx, sy2);
  const double m2 = ((2 * 1 + 1) * 2.0 - 1 * 1.0) / 2.0;
  CHECK(s2.body_slope_hi() == doctest::Approx(m2).epsilon(1e-15));
  const auto t = attach_linear_tails(s2, std::nullopt, 2.5);
  CHECK(evaluate(t, 2.5) == doctest::Approx(3 + m2 * 0.5).epsilon(1e-15));
  CHECK(evaluate(t, 2.0) == doctest::Approx(3.0).epsilon(1e-15));
  // tail is continuous with the body at the junction
  CHECK(std::abs(evaluate(t, 2.0 - 1e-9) - evaluate(t, 2.0 + 1e-9)) < 1e-8);
  // lengthening an existing tail
  const auto t2 = attach_linear_tails(t, std::nullopt, 3.0);
  CHECK(evaluate(t2, 3.0) == doctest::Approx(3 + m2).epsilon(1e-15));

  CHECK(code_of([&] { attach_linear_tails(s2, 1.0, std::nullopt); }) == ErrorCode::TargetInsideDomain);
  CHECK(code_of([&] { attach_linear_tails(s2, std::nullopt, 1.5); }) == ErrorCode::TargetInsideDomain);
}

TEST_CASE("log-rate of quality orientation") {
  const std::vector<double> q{30, 33, 36, 38};
  const auto f = fit_pchip(q, kLogRates, Orientation::LogRateOfQuality);
  CHECK(f.orientation() == Orientation::LogRateOfQuality);
  CHECK(evaluate(f, 33) == doctest::Approx(kLogRates[1]).epsilon(1e-15));
}
