#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kacpoly/polynomial.hpp"

namespace kacpoly {

/// Interval with exact rational endpoints; a missing endpoint is infinite
/// (and therefore open).
struct RationalInterval {
  std::optional<mpq_class> lo;
  std::optional<mpq_class> hi;
  bool lo_closed = false;
  bool hi_closed = false;

  /// Exact conversion: every finite double is a dyadic rational.
  static RationalInterval from(const Interval& interval);
};

/// Largest degree accepted by the exact Sturm path.
inline constexpr std::size_t kSturmDegreeLimit = 64;

/// Exact integer coefficients of 2^s * f for the smallest s that clears all
/// fractional bits; the root set is unchanged.
std::vector<mpz_class> exact_integer_coeffs(std::span<const double> coeffs);

/// Number of real roots in the interval, counted with multiplicity.
/// Throws ZeroPolynomial for f == 0 and DegreeTooLarge above the guard.
std::size_t sturm_count(std::span<const mpz_class> int_coeffs, const RationalInterval& interval);

struct SturmRoots {
  std::vector<double> roots;          // distinct, ascending
  std::vector<std::size_t> multiplicity;
};

/// Isolates every real root in the interval and refines it to double
/// precision by exact sign bisection.
SturmRoots sturm_roots(std::span<const mpz_class> int_coeffs, const RationalInterval& interval);

}  // namespace kacpoly
