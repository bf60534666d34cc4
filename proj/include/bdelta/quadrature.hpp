#pragma once

#include <cmath>
#include <functional>

namespace bdelta {

/// Adaptive Simpson quadrature to a relative tolerance of the whole-interval
/// estimate. Intended for smooth integrands; split at kinks before calling.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double rel_tol = 1e-10, int max_depth = 48);

}  // namespace bdelta
