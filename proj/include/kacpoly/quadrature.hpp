#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace kacpoly {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // sum of |K15 - G7| over the final partition
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration over the partition
/// given by `breakpoints` (ascending, at least two). The worst subinterval is
/// bisected until the total error estimate is <= abs_tol. Throws
/// QuadratureFailure after `max_intervals` subintervals.
QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              std::span<const double> breakpoints, double abs_tol,
                              std::size_t max_intervals = 5000);

}  // namespace kacpoly
