#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kacpoly/polynomial.hpp"

namespace kacpoly {

/// companion: eigenvalues of the balanced companion matrix.
/// sturm: exact Sturm sequences over the integers (degree <= 64).
/// sweep: density-adapted sign sweep with critical-point splitting; O(n) per
///        sample point, used for high degrees.
enum class RootMethod { Companion, Sturm, Sweep };

RootMethod parse_root_method(std::string_view text);
std::string to_string(RootMethod method);

enum class CountStatus { Ok, ZeroPolynomial };

/// Real roots found in a query interval. `count` includes multiplicity;
/// `roots` lists distinct roots ascending with `multiplicity` alongside.
struct RootCountReport {
  std::size_t count = 0;
  std::vector<double> roots;
  std::vector<std::size_t> multiplicity;
  RootMethod method = RootMethod::Companion;
  double max_residual = 0.0;  // max over roots of |f(r)| / sum |a_m| |r|^m
  CountStatus status = CountStatus::Ok;
  bool near_boundary = false;  // an eigenvalue sat close to the real-axis cut
};

inline constexpr double kDefaultRealTol = 1e-8;

/// All real roots via the companion matrix. A zero polynomial yields count 0
/// with status ZeroPolynomial. Throws EigenFailure if QR does not converge.
RootCountReport real_roots(std::span<const double> coeffs, double tol = kDefaultRealTol);

/// Roots in `interval`, honouring open/closed endpoints.
RootCountReport count_in_interval(std::span<const double> coeffs, const Interval& interval,
                                  RootMethod method = RootMethod::Companion,
                                  double tol = kDefaultRealTol);

/// Counts real roots of many polynomials that share coefficient variances,
/// in a fixed list of open regions. With the sweep method the grids are
/// built once from the variances, with every region endpoint as a node, so
/// a trial needs only one pass per chart and no root location.
class RegionCounter {
 public:
  /// `weights` are the coefficient standard deviations c_0..c_n. Throws
  /// std::invalid_argument if a region has a closed endpoint.
  RegionCounter(std::span<const double> weights, std::vector<Interval> regions,
                RootMethod method, double tol = kDefaultRealTol);

  struct Result {
    std::vector<std::size_t> counts;  // per region, with multiplicity
    CountStatus status = CountStatus::Ok;
  };
  Result count(std::span<const double> coeffs) const;

  const std::vector<Interval>& regions() const { return regions_; }
  RootMethod method() const { return method_; }

 private:
  struct ChartRange {
    std::size_t first = 0;  // cells [first, last)
    std::size_t last = 0;
  };
  std::vector<Interval> regions_;
  RootMethod method_;
  double tol_;
  // per chart (x, -x, 1/x, -1/x): sweep nodes and each region's cell range
  std::array<std::vector<double>, 4> nodes_;
  std::vector<std::array<ChartRange, 4>> ranges_;
};

}  // namespace kacpoly
