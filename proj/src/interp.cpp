#include "bdelta/interp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bdelta/error.hpp"

namespace bdelta {

namespace {

constexpr double kDomainSlack = 1e-12;

double slack_for(double bound) { return kDomainSlack * (1.0 + std::abs(bound)); }

void check_abscissa(std::span<const double> xs, std::span<const double> ys, std::size_t min_points,
                    const char* what) {
  if (xs.size() != ys.size())
    throw Error(ErrorCode::MalformedRow, std::string(what) + ": xs and ys differ in length");
  if (xs.size() < min_points)
    throw Error(ErrorCode::TooFewPoints, std::string(what) + " needs at least " +
                                             std::to_string(min_points) + " points, got " +
                                             std::to_string(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw Error(ErrorCode::NonFiniteValue, std::string(what) + ": point " + std::to_string(i));
    if (i > 0 && !(xs[i] > xs[i - 1]))
      throw Error(ErrorCode::NonAscendingRate,
                  std::string(what) + ": abscissa not strictly increasing at " + std::to_string(i));
  }
}

// Solves the dense system in place with partial pivoting.
std::array<double, 4> solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4> b) {
  double max_diag = 0.0;
  for (int i = 0; i < 4; ++i) max_diag = std::max(max_diag, std::abs(a[i][i]));
  const double tiny = 1e-13 * max_diag;

  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (!(std::abs(a[pivot][col]) > tiny))
      throw Error(ErrorCode::SingularSystem, "cubic normal equations are singular");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, 4> x{};
  for (int r = 3; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 4; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

// Hermite segment k as a + b u + c u^2 + d u^3 with u = x - x_k.
struct SegmentPoly {
  double a, b, c, d;

  double value(double u) const { return a + u * (b + u * (c + u * d)); }
  double derivative(double u) const { return b + u * (2.0 * c + u * 3.0 * d); }
  double antiderivative(double u) const {
    return u * (a + u * (b / 2.0 + u * (c / 3.0 + u * d / 4.0)));
  }
};

SegmentPoly segment(std::span<const HermiteKnot> knots, std::size_t k) {
  const auto& l = knots[k];
  const auto& r = knots[k + 1];
  const double h = r.x - l.x;
  const double secant = (r.y - l.y) / h;
  return {l.y, l.slope, (3.0 * secant - 2.0 * l.slope - r.slope) / h,
          (l.slope + r.slope - 2.0 * secant) / (h * h)};
}

std::size_t segment_index(std::span<const HermiteKnot> knots, double x) {
  auto it = std::upper_bound(knots.begin(), knots.end(), x,
                             [](double v, const HermiteKnot& k) { return v < k.x; });
  const auto idx = static_cast<std::size_t>(std::distance(knots.begin(), it));
  if (idx == 0) return 0;
  return std::min(idx - 1, knots.size() - 2);
}

double sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double pchip_end_slope(double h0, double h1, double d0, double d1) {
  double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (sign_of(m) != sign_of(d0)) {
    m = 0.0;
  } else if (sign_of(d0) != sign_of(d1) && std::abs(m) > std::abs(3.0 * d0)) {
    m = 3.0 * d0;
  }
  return m;
}

}  // namespace

bool FittedCurve::covers(double x) const noexcept {
  return x >= lo() - slack_for(lo()) && x <= hi() + slack_for(hi());
}

double FittedCurve::body_value(double x) const {
  if (method_ == FitMethod::CubicFit) {
    const double t = (x - center_) / scale_;
    const auto& a = scaled_coeffs_;
    return a[0] + t * (a[1] + t * (a[2] + t * a[3]));
  }
  const auto k = segment_index(knots_, x);
  return segment(knots_, k).value(x - knots_[k].x);
}

double FittedCurve::body_derivative(double x) const {
  if (method_ == FitMethod::CubicFit) {
    const double t = (x - center_) / scale_;
    const auto& a = scaled_coeffs_;
    return (a[1] + t * (2.0 * a[2] + t * 3.0 * a[3])) / scale_;
  }
  const auto k = segment_index(knots_, x);
  return segment(knots_, k).derivative(x - knots_[k].x);
}

double FittedCurve::body_integral(double a, double b) const {
  if (b <= a) return 0.0;
  if (method_ == FitMethod::CubicFit) {
    const auto& c = scaled_coeffs_;
    auto prim = [&](double t) {
      return t * (c[0] + t * (c[1] / 2.0 + t * (c[2] / 3.0 + t * c[3] / 4.0)));
    };
    return scale_ * (prim((b - center_) / scale_) - prim((a - center_) / scale_));
  }
  double total = 0.0;
  const auto first = segment_index(knots_, a);
  const auto last = segment_index(knots_, b);
  for (auto k = first; k <= last; ++k) {
    const double lo = (k == first) ? a : knots_[k].x;
    const double hi = (k == last) ? b : knots_[k + 1].x;
    if (hi <= lo) continue;
    const auto poly = segment(knots_, k);
    total += poly.antiderivative(hi - knots_[k].x) - poly.antiderivative(lo - knots_[k].x);
  }
  return total;
}

double FittedCurve::body_slope_lo() const { return body_derivative(body_lo()); }

double FittedCurve::body_slope_hi() const {
  if (method_ == FitMethod::PiecewiseCubic) return knots_.back().slope;
  return body_derivative(body_hi());
}

double FittedCurve::residual_norm() const {
  double ss = 0.0;
  for (std::size_t i = 0; i < data_x_.size(); ++i) {
    const double r = body_value(data_x_[i]) - data_y_[i];
    ss += r * r;
  }
  return std::sqrt(ss);
}

std::vector<double> FittedCurve::breakpoints() const {
  std::vector<double> out;
  if (low_tail_) out.push_back(low_tail_->extent);
  if (method_ == FitMethod::PiecewiseCubic) {
    for (const auto& k : knots_) out.push_back(k.x);
  } else {
    out.push_back(body_lo());
    out.push_back(body_hi());
  }
  if (high_tail_) out.push_back(high_tail_->extent);
  return out;
}

FittedCurve fit_cubic(std::span<const double> xs, std::span<const double> ys,
                      Orientation orientation) {
  check_abscissa(xs, ys, 4, "cubic fit");
  const auto n = xs.size();

  FittedCurve f;
  f.method_ = FitMethod::CubicFit;
  f.orientation_ = orientation;
  f.data_x_.assign(xs.begin(), xs.end());
  f.data_y_.assign(ys.begin(), ys.end());
  f.center_ = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  f.scale_ = (xs.back() - xs.front()) / 2.0;

  std::array<std::array<double, 4>, 4> gram{};
  std::array<double, 4> rhs{};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (xs[i] - f.center_) / f.scale_;
    const std::array<double, 4> row{1.0, t, t * t, t * t * t};
    for (int r = 0; r < 4; ++r) {
      rhs[r] += row[r] * ys[i];
      for (int c = 0; c < 4; ++c) gram[r][c] += row[r] * row[c];
    }
  }
  f.scaled_coeffs_ = solve4(gram, rhs);

  // Expand sum a_k ((x - m) / s)^k into powers of x.
  static constexpr double binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  for (int j = 0; j < 4; ++j) {
    double cj = 0.0;
    for (int k = j; k < 4; ++k)
      cj += f.scaled_coeffs_[k] * binom[k][j] * std::pow(-f.center_, k - j) / std::pow(f.scale_, k);
    f.raw_coeffs_[j] = cj;
  }
  return f;
}

FittedCurve fit_pchip(std::span<const double> xs, std::span<const double> ys,
                      Orientation orientation) {
  check_abscissa(xs, ys, 2, "piecewise cubic fit");
  const auto n = xs.size();

  std::vector<double> h(n - 1), secant(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = xs[k + 1] - xs[k];
    secant[k] = (ys[k + 1] - ys[k]) / h[k];
  }

  std::vector<double> m(n, 0.0);
  if (n == 2) {
    m[0] = m[1] = secant[0];
  } else {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double d0 = secant[k - 1];
      const double d1 = secant[k];
      if (d0 * d1 <= 0.0) continue;
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      m[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
    }
    m[0] = pchip_end_slope(h[0], h[1], secant[0], secant[1]);
    m[n - 1] = pchip_end_slope(h[n - 2], h[n - 3], secant[n - 2], secant[n - 3]);
  }

  FittedCurve f;
  f.method_ = FitMethod::PiecewiseCubic;
  f.orientation_ = orientation;
  f.data_x_.assign(xs.begin(), xs.end());
  f.data_y_.assign(ys.begin(), ys.end());
  f.knots_.reserve(n);
  for (std::size_t k = 0; k < n; ++k) f.knots_.push_back({xs[k], ys[k], m[k]});
  return f;
}

FittedCurve fit_curve(FitMethod method, std::span<const double> xs, std::span<const double> ys,
                      Orientation orientation) {
  return method == FitMethod::CubicFit ? fit_cubic(xs, ys, orientation)
                                       : fit_pchip(xs, ys, orientation);
}

double evaluate(const FittedCurve& f, double x) {
  if (!f.covers(x))
    throw Error(ErrorCode::OutOfDomain, std::to_string(x) + " outside [" + std::to_string(f.lo()) +
                                            ", " + std::to_string(f.hi()) + "]");
  if (x < f.body_lo()) {
    if (f.low_tail_) return f.low_tail_->value(x);
    x = f.body_lo();
  } else if (x > f.body_hi()) {
    if (f.high_tail_) return f.high_tail_->value(x);
    x = f.body_hi();
  }
  return f.body_value(x);
}

double evaluate_derivative(const FittedCurve& f, double x) {
  if (!f.covers(x))
    throw Error(ErrorCode::OutOfDomain, std::to_string(x) + " outside [" + std::to_string(f.lo()) +
                                            ", " + std::to_string(f.hi()) + "]");
  if (x < f.body_lo() && f.low_tail_) return f.low_tail_->slope;
  if (x > f.body_hi() && f.high_tail_) return f.high_tail_->slope;
  return f.body_derivative(std::clamp(x, f.body_lo(), f.body_hi()));
}

double integrate(const FittedCurve& f, double lo, double hi) {
  if (!(lo <= hi))
    throw Error(ErrorCode::InvertedInterval,
                "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  if (!f.covers(lo) || !f.covers(hi))
    throw Error(ErrorCode::OutOfDomain, "[" + std::to_string(lo) + ", " + std::to_string(hi) +
                                            "] not within [" + std::to_string(f.lo()) + ", " +
                                            std::to_string(f.hi()) + "]");
  double total = 0.0;
  const double blo = f.body_lo();
  const double bhi = f.body_hi();

  if (f.low_tail_ && lo < blo) {
    const double b = std::min(hi, blo);
    total += (b - lo) * f.low_tail_->value((lo + b) / 2.0);
  }
  const double a = std::clamp(lo, blo, bhi);
  const double b = std::clamp(hi, blo, bhi);
  total += f.body_integral(a, b);
  if (f.high_tail_ && hi > bhi) {
    const double c = std::max(lo, bhi);
    total += (hi - c) * f.high_tail_->value((c + hi) / 2.0);
  }
  return total;
}

FittedCurve attach_linear_tails(const FittedCurve& f, std::optional<double> extend_lo,
                                std::optional<double> extend_hi) {
  FittedCurve out = f;
  if (extend_lo) {
    if (!(*extend_lo < f.lo()))
      throw Error(ErrorCode::TargetInsideDomain, "low target " + std::to_string(*extend_lo) +
                                                     " is not below " + std::to_string(f.lo()));
    if (out.low_tail_) {
      out.low_tail_->extent = *extend_lo;
    } else {
      const double x0 = f.body_lo();
      out.low_tail_ = LinearTail{x0, f.body_value(x0), f.body_slope_lo(), *extend_lo};
    }
  }
  if (extend_hi) {
    if (!(*extend_hi > f.hi()))
      throw Error(ErrorCode::TargetInsideDomain, "high target " + std::to_string(*extend_hi) +
                                                     " is not above " + std::to_string(f.hi()));
    if (out.high_tail_) {
      out.high_tail_->extent = *extend_hi;
    } else {
      const double x1 = f.body_hi();
      out.high_tail_ = LinearTail{x1, f.body_value(x1), f.body_slope_hi(), *extend_hi};
    }
  }
  return out;
}

}  // namespace bdelta
