#include "kacpoly/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kacpoly/errors.hpp"

namespace kacpoly {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b* (fifth minus fourth order weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Step {
  Vec2 y;
  Vec2 f_end;  // field at the new point (first-same-as-last)
  double err;  // scaled error norm
};

Vec2 axpy(const Vec2& y, double h, std::initializer_list<std::pair<double, Vec2>> terms) {
  Vec2 out = y;
  for (const auto& [w, k] : terms) {
    out[0] += h * w * k[0];
    out[1] += h * w * k[1];
  }
  return out;
}

Step dp_step(const PlanarField& f, const Vec2& y, const Vec2& k1, double h, double rtol, double atol) {
  const Vec2 k2 = f(axpy(y, h, {{a21, k1}}));
  const Vec2 k3 = f(axpy(y, h, {{a31, k1}, {a32, k2}}));
  const Vec2 k4 = f(axpy(y, h, {{a41, k1}, {a42, k2}, {a43, k3}}));
  const Vec2 k5 = f(axpy(y, h, {{a51, k1}, {a52, k2}, {a53, k3}, {a54, k4}}));
  const Vec2 k6 = f(axpy(y, h, {{a61, k1}, {a62, k2}, {a63, k3}, {a64, k4}, {a65, k5}}));
  const Vec2 y5 = axpy(y, h, {{b1, k1}, {b3, k3}, {b4, k4}, {b5, k5}, {b6, k6}});
  const Vec2 k7 = f(y5);
  double sq = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
    const double scale = atol + rtol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
    sq += (e / scale) * (e / scale);
  }
  return {y5, k7, std::sqrt(sq / 2.0)};
}

// Cubic Hermite estimate of where y crosses zero inside [0, h].
double hermite_crossing(double y0, double d0, double y1, double d1, double h) {
  auto value = [&](double s) {
    const double u = s / h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
  };
  double lo = 0.0, hi = h;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((value(mid) > 0.0) == (y0 > 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ReturnResult first_return(const PlanarField& field, double r0, const ReturnOptions& opts) {
  Vec2 y = {r0, 0.0};
  Vec2 k1 = field(y);
  double t = 0.0;
  double h = 0.01;
  const double bound = opts.escape_factor * r0;
  bool circled = false;  // a return only counts after visiting x < 0
  ReturnResult out;
  while (true) {
    if (t > opts.max_time) {
      throw NoReturn("no return to the positive x-axis within time " +
                     std::to_string(opts.max_time));
    }
    const Step s = dp_step(field, y, k1, h, opts.rtol, opts.atol);
    ++out.steps;
    if (!(s.err <= 1.0)) {
      const double fac = std::isfinite(s.err) ? std::max(0.2, 0.9 * std::pow(s.err, -0.2)) : 0.2;
      h *= fac;
      if (h < 1e-14) throw NoReturn("step size underflow");
      continue;
    }
    if (std::hypot(s.y[0], s.y[1]) > bound) {
      throw Escape("trajectory left radius " + std::to_string(bound));
    }
    if (circled && y[1] > 0.0 && s.y[1] <= 0.0 && s.y[0] > 0.0) {
      // Hermite guess, an accurate step to the guess, then a Henon step:
      // with y as the independent variable, dx/dy = xdot/ydot, dt/dy = 1/ydot.
      const double tau = hermite_crossing(y[1], k1[1], s.y[1], s.f_end[1], h);
      const Vec2 z = tau > 0.0 ? dp_step(field, y, k1, tau, opts.rtol, opts.atol).y : y;
      auto slope = [&field](double xv, double yv) {
        const Vec2 fv = field({xv, yv});
        return Vec2{fv[0] / fv[1], 1.0 / fv[1]};
      };
      double x = z[0];
      double tt = t + tau;
      if (std::fabs(z[1]) > opts.crossing_tol * r0) {
        const double dy = -z[1];
        const Vec2 q1 = slope(x, z[1]);
        const Vec2 q2 = slope(x + 0.5 * dy * q1[0], z[1] + 0.5 * dy);
        const Vec2 q3 = slope(x + 0.5 * dy * q2[0], z[1] + 0.5 * dy);
        const Vec2 q4 = slope(x + dy * q3[0], 0.0);
        x += dy / 6.0 * (q1[0] + 2 * q2[0] + 2 * q3[0] + q4[0]);
        tt += dy / 6.0 * (q1[1] + 2 * q2[1] + 2 * q3[1] + q4[1]);
      }
      out.x = x;
      out.time = tt;
      return out;
    }
    if (s.y[0] < 0.0) circled = true;
    t += h;
    y = s.y;
    k1 = s.f_end;
    const double fac = s.err > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(s.err, -0.2))) : 5.0;
    h *= fac;
  }
}

}  // namespace kacpoly
