#pragma once

// Independent reference computations used only by the tests.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline mpz_class double_factorial(std::int64_t k) {
  mpz_class p = 1;
  for (std::int64_t j = k; j > 1; j -= 2) p *= static_cast<unsigned long>(j);
  return p;
}

/// sum_l [A(l)^2 + B(l)^2] as an exact rational; variance_center = (pi/2) * this.
inline mpq_class center_variance_sum(std::int64_t m) {
  const mpz_class den = double_factorial(2 * m + 2);
  mpq_class sum = 0;
  for (std::int64_t l = 0; l <= m; ++l) {
    mpq_class a(double_factorial(2 * m - 2 * l + 1) * double_factorial(2 * l - 1), den);
    mpq_class b(double_factorial(2 * m - 2 * l - 1) * double_factorial(2 * l + 1), den);
    a.canonicalize();
    b.canonicalize();
    sum += a * a + b * b;
  }
  return sum;
}

/// Composite Simpson rule with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace oracle
