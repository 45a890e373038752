#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kacpoly/coeffs.hpp"
#include "kacpoly/polynomial.hpp"

namespace kacpoly {

/// Covariance sums of a Gaussian polynomial with weights c_i:
/// P = sum c_i^2 x^{2i}, Q = sum i^2 c_i^2 x^{2i-2}, R = sum i c_i^2 x^{2i-1}.
struct PQR {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
};

/// Throws DomainError unless |x| < 1.
PQR pqr(const CoeffVector& coeffs, double x);

/// Expected zero density (1/pi) sqrt(PQ - R^2) / P at |x| < 1.
double kac_rice_density(const CoeffVector& coeffs, double x);

/// [1 - exp(-(ln n)^{1/5}), 1 - exp((ln n)^{1/5}) / n]; `empty` when lo >= hi.
struct CoreInterval {
  std::size_t n = 0;
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;
  Interval interval() const { return Interval::open(lo, hi); }
};

/// Throws DomainError for n < 2.
CoreInterval core_interval(std::size_t n);

struct KacRiceValue {
  double value = 0.0;
  double error_estimate = 0.0;
};

inline constexpr double kDefaultQuadTol = 1e-8;

/// Expected number of real zeros in `interval` for Gaussian noise. Works in
/// t = -ln(1 - |x|) on (0, 1); |x| > 1 goes through the reversed weights and
/// negative x through the mirror. Throws QuadratureFailure.
KacRiceValue expected_roots_gaussian(const CoeffVector& coeffs, const Interval& interval,
                                     double quad_tol = kDefaultQuadTol);

/// Expected zeros on (1, inf) computed as the (0, 1) count of the reversed
/// weights d_m = c_{n-m} / c_n.
KacRiceValue expected_roots_gaussian_reversed(const CoeffVector& coeffs,
                                              double quad_tol = kDefaultQuadTol);

enum class Regime { Supercritical, Critical, Subcritical };
Regime regime_of(double rho);
std::string to_string(Regime regime);

/// 01 = (0,1), 1inf = (1,inf), sym = (-1,1), R = the real line.
enum class KacRegion { Inner, Outer, Symmetric, RealLine };
KacRegion parse_kac_region(std::string_view text);
std::string to_string(KacRegion region);
Interval to_interval(KacRegion region);

struct AsymptoticPrediction {
  Regime regime = Regime::Critical;
  KacRegion region = KacRegion::Inner;
  std::optional<double> value;  // empty when only boundedness is known
  std::string formula;
};

/// Leading-order expected count, natural logarithms. Throws DomainError for n < 3.
AsymptoticPrediction asymptotic_prediction(double rho, KacRegion region, std::size_t n);

}  // namespace kacpoly
