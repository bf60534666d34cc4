#include "bdelta/quadrature.hpp"

namespace bdelta {

namespace {

struct Panel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double refine(const std::function<double(double)>& fn, const Panel& p, double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = fn(lm);
  const double frm = fn(rm);
  const double left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
  const double right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return refine(fn, {p.a, lm, p.m, p.fa, flm, p.fm, left}, tol / 2.0, depth - 1) +
         refine(fn, {p.m, rm, p.b, p.fm, frm, p.fb, right}, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double rel_tol, int max_depth) {
  if (b == a) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = fn(a);
  const double fm = fn(m);
  const double fb = fn(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // Scale by the integral of |f| estimated from the three samples so the
  // tolerance stays meaningful when the signed integral is near zero.
  const double scale = (b - a) / 6.0 * (std::abs(fa) + 4.0 * std::abs(fm) + std::abs(fb));
  const double tol = rel_tol * (scale > 0.0 ? scale : 1e-300);
  return refine(fn, {a, m, b, fa, fm, fb, whole}, tol, max_depth);
}

}  // namespace bdelta
