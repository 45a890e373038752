#include "kacpoly/kacrice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kacpoly/errors.hpp"
#include "kacpoly/quadrature.hpp"
#include "kacpoly/summation.hpp"

namespace kacpoly {

namespace {

constexpr double kTailFraction = 1e-18;
constexpr std::size_t kTailCheckStride = 32;
// Beyond t = ln(n+1) + kTailMargin the t-integrand is below e^{-kTailMargin}.
constexpr double kTailMargin = 40.0;

// Zero density of a Gaussian polynomial on [0, 1), evaluated from the gap
// s = 1 - x so that points within 1e-16 of 1 stay distinct.
class GapDensity {
 public:
  explicit GapDensity(const std::vector<double>& weights) : w_(weights.size()) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] = weights[i] * weights[i];
    // suffix maxima of i^2 c_i^2 bound the unsummed tail of every moment
    tail_max_.assign(w_.size() + 1, 0.0);
    for (std::size_t i = w_.size(); i-- > 0;) {
      const double di = static_cast<double>(i);
      tail_max_[i] = std::max(tail_max_[i + 1], std::max(1.0, di * di) * w_[i]);
    }
  }

  std::size_t degree() const { return w_.size() - 1; }

  // Weighted moments sum_i i^k c_i^2 x^{2i}, k = 0, 1, 2.
  struct Moments {
    double m0, m1, m2;
  };

  Moments moments(double gap) const {
    const double log_x2 = 2.0 * std::log1p(-gap);
    const double x2 = std::exp(log_x2);
    const double one_minus_x2 = -std::expm1(log_x2);
    CompensatedSum m0, m1, m2;
    double power = 1.0;
    for (std::size_t i = 0; i < w_.size(); ++i) {
      const double di = static_cast<double>(i);
      const double term = w_[i] * power;
      m0.add(term);
      m1.add(di * term);
      m2.add(di * di * term);
      power *= x2;
      if (i % kTailCheckStride == kTailCheckStride - 1) {
        if (power == 0.0) break;
        const double tail = tail_max_[i + 1] * power / one_minus_x2;
        const double total = std::max(m2.value(), m0.value());
        if (tail <= kTailFraction * total) break;
      }
    }
    return {m0.value(), m1.value(), m2.value()};
  }

  // (1/pi) sqrt(PQ - R^2) / P = (1/pi) sqrt(m0 m2 - m1^2) / (m0 x)
  double density(double gap) const {
    const double x = 1.0 - gap;
    if (x == 0.0) {
      return w_.size() > 1 ? std::sqrt(w_[1] / w_[0]) / std::numbers::pi : 0.0;
    }
    const auto [m0, m1, m2] = moments(gap);
    if (!(m0 > 0.0)) return 0.0;
    const double sq = m1 * m1;
    const double err = std::fma(m1, m1, -sq);
    const double det = std::fma(m0, m2, -sq) - err;
    return std::sqrt(std::max(det, 0.0)) / (m0 * x * std::numbers::pi);
  }

 private:
  std::vector<double> w_;
  std::vector<double> tail_max_;
};

double gap_of(double x) { return 1.0 - x; }

// Integral of the density over (a, b) with 0 <= a < b <= 1, in t = -ln(1 - x).
KacRiceValue integrate_unit(const GapDensity& g, double a, double b, double tol) {
  const double t_max = std::log(static_cast<double>(g.degree()) + 1.0) + kTailMargin;
  const double t_lo = -std::log1p(-a);
  const double t_hi = b >= 1.0 ? t_max : std::min(-std::log1p(-b), t_max);
  if (!(t_hi > t_lo)) return {};
  // unit-width starting cells keep the bump near t ~ ln n from being missed
  std::vector<double> breaks;
  const int cells = std::max(1, static_cast<int>(std::ceil(t_hi - t_lo)));
  for (int i = 0; i <= cells; ++i) {
    breaks.push_back(i == cells ? t_hi : t_lo + (t_hi - t_lo) * i / cells);
  }
  const auto res = integrate_adaptive(
      [&](double t) {
        const double gap = std::exp(-t);
        return g.density(gap) * gap;
      },
      breaks, tol);
  return {res.value, res.error};
}

CoeffVector reversed_weights(const CoeffVector& coeffs) {
  if (coeffs.values.empty() || coeffs.values.back() == 0.0) {
    throw DomainError("reversed weights need a nonzero top coefficient");
  }
  return reversed(coeffs);
}

}  // namespace

PQR pqr(const CoeffVector& coeffs, double x) {
  if (!(std::fabs(x) < 1.0)) throw DomainError("pqr: requires |x| < 1");
  const double ax = std::fabs(x);
  const double x2 = ax * ax;
  const double one_minus_x2 = 1.0 - x2;
  const auto& c = coeffs.values;
  // tail bound uses max_{j>i} j^2 c_j^2, computed lazily from the back
  std::vector<double> tail_max(c.size() + 1, 0.0);
  for (std::size_t i = c.size(); i-- > 0;) {
    const double di = static_cast<double>(i);
    tail_max[i] = std::max(tail_max[i + 1], std::max(1.0, di * di) * c[i] * c[i]);
  }
  CompensatedSum p, q, r;
  double pow_even = 1.0;  // x^{2i}
  double pow_odd = ax;    // x^{2i+1}
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double di = static_cast<double>(i);
    const double w = c[i] * c[i];
    p.add(w * pow_even);
    // Q and R terms of index i+1 use powers x^{2i} and x^{2i+1}
    if (i + 1 < c.size()) {
      const double dj = di + 1.0;
      const double wj = c[i + 1] * c[i + 1];
      q.add(dj * dj * wj * pow_even);
      r.add(dj * wj * pow_odd);
    }
    pow_even *= x2;
    pow_odd *= x2;
    if (pow_even == 0.0) break;
    if (tail_max[i + 1] * pow_even / one_minus_x2 <=
        kTailFraction * std::max(p.value(), q.value())) {
      break;
    }
  }
  return {p.value(), q.value(), x < 0 ? -r.value() : r.value()};
}

double kac_rice_density(const CoeffVector& coeffs, double x) {
  if (!(std::fabs(x) < 1.0)) throw DomainError("kac_rice_density: requires |x| < 1");
  return GapDensity(coeffs.values).density(gap_of(std::fabs(x)));
}

CoreInterval core_interval(std::size_t n) {
  if (n < 2) throw DomainError("core_interval: requires n >= 2");
  CoreInterval ci;
  ci.n = n;
  const double root5 = std::pow(std::log(static_cast<double>(n)), 0.2);
  ci.lo = -std::expm1(-root5);
  ci.hi = 1.0 - std::exp(root5) / static_cast<double>(n);
  ci.empty = !(ci.lo < ci.hi) || ci.lo <= 0.0;
  return ci;
}

KacRiceValue expected_roots_gaussian(const CoeffVector& coeffs, const Interval& interval,
                                     double quad_tol) {
  if (coeffs.values.empty()) throw DomainError("empty coefficient vector");
  if (interval.empty()) return {};
  // Pieces of the interval in each of the four charts x, -x, 1/x, -1/x.
  struct Part {
    bool outer;
    double a, b;  // subinterval of [0, 1] in the chart variable
  };
  std::vector<Part> parts;
  const double lo = interval.lo, hi = interval.hi;
  auto add = [&](bool outer, double a, double b) {
    if (b > a) parts.push_back({outer, a, b});
  };
  auto inv = [](double v) { return std::isinf(v) ? 0.0 : 1.0 / v; };
  add(false, std::max(lo, 0.0), std::min(hi, 1.0));
  add(false, std::max(-hi, 0.0), std::min(-lo, 1.0));
  if (hi > 1.0) add(true, inv(hi), inv(std::max(lo, 1.0)));
  if (lo < -1.0) add(true, inv(-lo), inv(std::max(-hi, 1.0)));

  // the tolerance is split evenly between the pieces
  const double tol = quad_tol / static_cast<double>(std::max<std::size_t>(parts.size(), 1));
  std::optional<GapDensity> inner, outer;
  KacRiceValue total;
  for (const auto& part : parts) {
    auto& g = part.outer ? outer : inner;
    if (!g) g.emplace(part.outer ? reversed_weights(coeffs).values : coeffs.values);
    const auto v = integrate_unit(*g, part.a, part.b, tol);
    total.value += v.value;
    total.error_estimate += v.error_estimate;
  }
  return total;
}

KacRiceValue expected_roots_gaussian_reversed(const CoeffVector& coeffs, double quad_tol) {
  return integrate_unit(GapDensity(reversed_weights(coeffs).values), 0.0, 1.0, quad_tol);
}

Regime regime_of(double rho) {
  if (rho > -0.5) return Regime::Supercritical;
  if (rho < -0.5) return Regime::Subcritical;
  return Regime::Critical;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Supercritical:
      return "supercritical";
    case Regime::Critical:
      return "critical";
    case Regime::Subcritical:
      return "subcritical";
  }
  return "?";
}

KacRegion parse_kac_region(std::string_view text) {
  if (text == "01") return KacRegion::Inner;
  if (text == "1inf") return KacRegion::Outer;
  if (text == "sym" || text == "m11") return KacRegion::Symmetric;
  if (text == "R") return KacRegion::RealLine;
  throw std::invalid_argument("unknown region: " + std::string(text) +
                              " (expected 01|1inf|sym|R)");
}

std::string to_string(KacRegion region) {
  switch (region) {
    case KacRegion::Inner:
      return "01";
    case KacRegion::Outer:
      return "1inf";
    case KacRegion::Symmetric:
      return "sym";
    case KacRegion::RealLine:
      return "R";
  }
  return "?";
}

Interval to_interval(KacRegion region) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (region) {
    case KacRegion::Inner:
      return Interval::open(0.0, 1.0);
    case KacRegion::Outer:
      return Interval::open(1.0, inf);
    case KacRegion::Symmetric:
      return Interval::open(-1.0, 1.0);
    case KacRegion::RealLine:
      return Interval::real_line();
  }
  return Interval::real_line();
}

AsymptoticPrediction asymptotic_prediction(double rho, KacRegion region, std::size_t n) {
  if (n < 3) throw DomainError("asymptotic_prediction: requires n >= 3");
  const double ln = std::log(static_cast<double>(n));
  const double pi = std::numbers::pi;
  AsymptoticPrediction out;
  out.regime = regime_of(rho);
  out.region = region;

  const double outer = ln / (2.0 * pi);
  std::optional<double> inner;
  std::string inner_formula;
  switch (out.regime) {
    case Regime::Supercritical:
      inner = std::sqrt(2.0 * rho + 1.0) * ln / (2.0 * pi);
      inner_formula = "sqrt(2rho+1)/(2pi)*ln(n)";
      break;
    case Regime::Critical:
      inner = std::sqrt(ln) / pi;
      inner_formula = "sqrt(ln(n))/pi";
      break;
    case Regime::Subcritical:
      inner_formula = "bounded";
      break;
  }

  switch (region) {
    case KacRegion::Inner:
      out.value = inner;
      out.formula = inner_formula;
      break;
    case KacRegion::Outer:
      out.value = outer;
      out.formula = "ln(n)/(2pi)";
      break;
    case KacRegion::Symmetric:
      if (inner) out.value = 2.0 * *inner;
      out.formula = inner ? "2*" + inner_formula : "bounded";
      break;
    case KacRegion::RealLine:
      if (out.regime == Regime::Supercritical) {
        out.value = 2.0 * (*inner + outer);
        out.formula = "(1+sqrt(2rho+1))/pi*ln(n)";
      } else {
        // inner contribution is of lower order
        out.value = ln / pi;
        out.formula = "ln(n)/pi";
      }
      break;
  }
  return out;
}

}  // namespace kacpoly
