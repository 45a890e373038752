#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kacpoly/coeffs.hpp"
#include "kacpoly/sampler.hpp"

namespace kacpoly {

/// Coefficients are stored in ascending order: coeffs[m] multiplies x^m.
using Coeffs = std::vector<double>;

/// Drops zero coefficients of the highest powers.
Coeffs trim_leading_zeros(std::span<const double> coeffs);

bool is_zero_polynomial(std::span<const double> coeffs);

double evaluate(std::span<const double> coeffs, double x);

/// (f(x), f'(x)) by a joint Horner pass.
std::pair<double, double> evaluate_with_derivative(std::span<const double> coeffs, double x);

/// Coefficients of f(-x).
Coeffs mirrored(std::span<const double> coeffs);

/// Coefficients of x^n f(1/x) after trimming; roots in (1, inf) of f map to
/// roots in (0, 1) of the result. Throws ZeroPolynomial for f == 0.
Coeffs reversed(std::span<const double> coeffs);

/// Weights d_m = c_{n-m} / c_n of the reversed random polynomial.
CoeffVector reversed(const CoeffVector& coeffs);

/// Reversed realized polynomial, normalised by c_n, with the reversed weights
/// and noise attached: realized[m] = d_m * xi_{n-m}.
RandomPoly reversed(const RandomPoly& poly);

/// A real interval; infinite endpoints must be open.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval open(double lo, double hi);
  static Interval closed(double lo, double hi);
  static Interval real_line();

  /// Parses "a,b" (open), or bracketed forms like "[a,b)", "(-inf,0]".
  static Interval parse(std::string_view text);

  bool contains(double x) const;
  bool empty() const;
  std::string to_string() const;
};

}  // namespace kacpoly
