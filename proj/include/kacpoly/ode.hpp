#pragma once

#include <array>
#include <functional>

namespace kacpoly {

using Vec2 = std::array<double, 2>;
using PlanarField = std::function<Vec2(const Vec2&)>;

struct ReturnOptions {
  double rtol = 1e-10;
  double atol = 1e-13;
  double escape_factor = 10.0;           // abort beyond escape_factor * r0
  double max_time = 4.0 * 3.14159265358979323846;
  double crossing_tol = 1e-12;
};

struct ReturnResult {
  double x = 0.0;     // abscissa of the first return
  double time = 0.0;  // return time
  int steps = 0;
};

/// Integrates an autonomous planar field from (r0, 0) with the Dormand-Prince
/// 5(4) pair until y next crosses zero from above with x > 0 (one clockwise
/// turn, after passing through x < 0). Throws Escape or NoReturn.
ReturnResult first_return(const PlanarField& field, double r0, const ReturnOptions& opts = {});

}  // namespace kacpoly
