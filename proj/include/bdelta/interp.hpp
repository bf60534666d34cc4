#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace bdelta {

enum class FitMethod { CubicFit, PiecewiseCubic };

/// Which variable the curve maps from and to. BD-Quality integrates quality
/// over log-rate, BD-Rate integrates log-rate over quality.
enum class Orientation { QualityOfLogRate, LogRateOfQuality };

struct HermiteKnot {
  double x;
  double y;
  double slope;
};

/// Straight continuation of the body beyond one of its ends.
struct LinearTail {
  double anchor_x;
  double anchor_y;
  double slope;
  double extent;  ///< far end of the tail

  double value(double x) const noexcept { return anchor_y + slope * (x - anchor_x); }
};

/// Evaluable and exactly integrable fitted curve: a single cubic polynomial
/// (least squares) or a monotone piecewise cubic Hermite spline, optionally
/// continued by linear tails.
class FittedCurve {
 public:
  FitMethod method() const noexcept { return method_; }
  Orientation orientation() const noexcept { return orientation_; }

  double body_lo() const noexcept { return data_x_.front(); }
  double body_hi() const noexcept { return data_x_.back(); }
  /// Full domain including tails.
  double lo() const noexcept { return low_tail_ ? low_tail_->extent : body_lo(); }
  double hi() const noexcept { return high_tail_ ? high_tail_->extent : body_hi(); }
  bool covers(double x) const noexcept;

  /// Monomial coefficients c0..c3 in the original abscissa (CubicFit only;
  /// zeros for PiecewiseCubic).
  const std::array<double, 4>& coefficients() const noexcept { return raw_coeffs_; }
  /// Knots with their Hermite slopes (PiecewiseCubic only).
  std::span<const HermiteKnot> knots() const noexcept { return knots_; }
  std::span<const double> data_x() const noexcept { return data_x_; }
  std::span<const double> data_y() const noexcept { return data_y_; }

  const std::optional<LinearTail>& low_tail() const noexcept { return low_tail_; }
  const std::optional<LinearTail>& high_tail() const noexcept { return high_tail_; }

  /// One-sided derivative of the body at body_lo() / body_hi().
  double body_slope_lo() const;
  double body_slope_hi() const;

  /// Root of the summed squared residuals at the data points.
  double residual_norm() const;

  /// Sorted positions where the curve's smooth pieces meet (data knots and
  /// tail junctions), including lo() and hi().
  std::vector<double> breakpoints() const;

 private:
  friend FittedCurve fit_cubic(std::span<const double>, std::span<const double>, Orientation);
  friend FittedCurve fit_pchip(std::span<const double>, std::span<const double>, Orientation);
  friend FittedCurve attach_linear_tails(const FittedCurve&, std::optional<double>,
                                         std::optional<double>);
  friend double evaluate(const FittedCurve&, double);
  friend double evaluate_derivative(const FittedCurve&, double);
  friend double integrate(const FittedCurve&, double, double);

  double body_value(double x) const;
  double body_derivative(double x) const;
  double body_integral(double a, double b) const;

  FitMethod method_ = FitMethod::PiecewiseCubic;
  Orientation orientation_ = Orientation::QualityOfLogRate;
  std::vector<double> data_x_;
  std::vector<double> data_y_;

  // CubicFit: p(x) = sum a_k t^k with t = (x - center) / scale.
  double center_ = 0.0;
  double scale_ = 1.0;
  std::array<double, 4> scaled_coeffs_{};
  std::array<double, 4> raw_coeffs_{};

  std::vector<HermiteKnot> knots_;

  std::optional<LinearTail> low_tail_;
  std::optional<LinearTail> high_tail_;
};

/// Least-squares cubic y = c0 + c1 x + c2 x^2 + c3 x^3 via normal equations on
/// the shifted and scaled abscissa. Exactly four points interpolate.
/// Throws TooFewPoints, NonAscendingRate (xs not strictly increasing),
/// NonFiniteValue, SingularSystem.
FittedCurve fit_cubic(std::span<const double> xs, std::span<const double> ys,
                      Orientation orientation = Orientation::QualityOfLogRate);

/// Monotonicity-preserving piecewise cubic Hermite interpolant
/// (Fritsch-Carlson interior slopes, one-sided three-point end slopes).
FittedCurve fit_pchip(std::span<const double> xs, std::span<const double> ys,
                      Orientation orientation = Orientation::QualityOfLogRate);

FittedCurve fit_curve(FitMethod method, std::span<const double> xs, std::span<const double> ys,
                      Orientation orientation = Orientation::QualityOfLogRate);

/// Throws OutOfDomain when x is not covered by the body or a tail.
double evaluate(const FittedCurve& f, double x);
double evaluate_derivative(const FittedCurve& f, double x);

/// Closed-form integral over [lo, hi]. Throws InvertedInterval, OutOfDomain.
double integrate(const FittedCurve& f, double lo, double hi);

/// Extends the domain down to `extend_lo` and/or up to `extend_hi` with linear
/// pieces whose slope is the body's end derivative. An existing tail on that
/// side is lengthened. Throws TargetInsideDomain.
FittedCurve attach_linear_tails(const FittedCurve& f, std::optional<double> extend_lo,
                                std::optional<double> extend_hi);

}  // namespace bdelta
